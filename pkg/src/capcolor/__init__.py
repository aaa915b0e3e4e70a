"""Capped and recursive capped color codes: construction, flag circuits,
fault-set certification and Pauli-frame protocol simulation."""

from .codes import (CappedCode, build_2d_color_code, build_ccc, build_code, build_rccc, fix_gauge,
                    steane_code)
from .circuits import CircuitSchedule, MeasurementCircuit, build_nonflag, build_one_flag, schedule_for
from .faults import Fault, enumerate_fault_set, is_distinguishable, is_distinguishable_via_2t
from .pauli import Pauli, StabilizerCode, distance_brute_force
from .protocols import build_decoder_table, run_ftec, run_ftm, run_ftp, run_t_gate

__version__ = "0.1.0"

__all__ = ["CappedCode", "build_2d_color_code", "build_ccc", "build_code", "build_rccc", "fix_gauge",
           "steane_code", "CircuitSchedule", "MeasurementCircuit", "build_nonflag", "build_one_flag",
           "schedule_for", "Fault", "enumerate_fault_set", "is_distinguishable", "is_distinguishable_via_2t",
           "Pauli", "StabilizerCode", "distance_brute_force", "build_decoder_table", "run_ftec", "run_ftm",
           "run_ftp", "run_t_gate"]
