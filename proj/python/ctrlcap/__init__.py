"""Bounds on the smallest Gramian eigenvalue, minimax errors and capacity."""

from ._core import (
    CtrlcapError,
    cap_closed_form,
    cap_estimate,
    capacity,
    control_energy,
    err,
    generate,
    gramian,
    lemma2,
    main,
    phi,
    phi_hoeffding,
    reproduce,
    thm2,
    verify_thm1,
    verify_thm2,
)

__all__ = [
    "CtrlcapError",
    "cap_closed_form",
    "cap_estimate",
    "capacity",
    "control_energy",
    "err",
    "generate",
    "gramian",
    "lemma2",
    "main",
    "phi",
    "phi_hoeffding",
    "reproduce",
    "thm2",
    "verify_thm1",
    "verify_thm2",
]
