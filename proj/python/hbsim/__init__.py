# SPDX-License-Identifier: Apache-2.0
"""Hybrid beam selection simulator for beamspace MIMO.

Thin Python layer over the native core. Experiment entry points take the same
keys as the command-line configuration file, as keyword arguments.
"""

from . import _hbsim
from ._hbsim import (
    ConfigError,
    DomainError,
    Error,
    IoError,
    NumericalError,
    SingularityError,
    beta_fn,
    cos2_angle,
    dft_matrix,
    expected_qe_closed,
    expected_qe_numeric,
    feedback_bits,
    load_channels,
    log_gamma,
    qe_case_bound,
    qe_ccdf,
    qe_table,
    rate_loss_bound,
    rate_perfect,
    rate_quantized,
    right_pseudoinverse,
    sample_channels,
    sample_isotropic_qe,
    select_sbs,
    steering_vector,
    zf_precoder,
)

__version__ = _hbsim.__version__


def _settings(kwargs):
    out = {}
    for key, value in kwargs.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(repr(float(v)) for v in value)
        out[key] = str(value)
    return out


def run(**config):
    """Run one configuration; returns {"rows": [...], "notes": [...], "wall_clock_s": float}."""
    return _hbsim.run(_settings(config))


def table1(**config):
    """Reproduce the five reference rate-loss configurations."""
    return _hbsim.table1(_settings(config))


def sweep(setting="fig2", rvq_full=False, **config):
    """Per-user rate against SNR for SBS, HBS Case I/II and the error-free ideal."""
    return _hbsim.sweep(_settings(config), setting, rvq_full)


__all__ = [name for name in dir() if not name.startswith("_")]
