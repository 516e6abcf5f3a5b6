"""Finite k-kernels of self-similar sets: dimension, entropy and graph-directed constructions."""

from .boxoracle import BoxCount, GeometricSet, box_dimension_estimate, builtin_set, count_boxes
from .core import DeterministicAutomaton, SetAutomaton, determinize, language_equal, minimize, trim
from .corpus import builtin_automaton
from .entropy import cube_count, entropy, entropy_estimate, verify_theorem, word_count
from .errors import SelfSimError
from .ggdc import build_ggdc, ggdc_dimension, level_sets, validate_ggdc
from .kernel import KernelPresentation, compute_kernel, rebase, subdivision_matrix
from .render import CubeList, level_approximation, render_pgm, render_svg
from .saturate import saturate
from .specdsl import parse_spec, print_spec, validate
from .spectral import dimension, spectral_radius

__version__ = "0.1.0"

__all__ = [
    "BoxCount", "CubeList", "DeterministicAutomaton", "GeometricSet", "KernelPresentation",
    "SelfSimError", "SetAutomaton", "box_dimension_estimate", "build_ggdc", "builtin_automaton",
    "builtin_set", "compute_kernel", "count_boxes", "cube_count", "determinize", "dimension",
    "entropy", "entropy_estimate", "ggdc_dimension", "language_equal", "level_approximation",
    "level_sets", "minimize", "parse_spec", "print_spec", "rebase", "render_pgm", "render_svg",
    "saturate", "spectral_radius", "subdivision_matrix", "trim", "validate", "validate_ggdc",
    "verify_theorem", "word_count",
]
