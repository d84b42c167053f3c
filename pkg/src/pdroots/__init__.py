"""n-divisible positive definite functions and their n-th roots."""

from ._kernels import BACKEND
from .atoms import Atom, GeometricTail, TranslateSum, eval_translate_sum, tail_knots
from .branch import Branch, BranchFunction, PeriodicBranches, PhaseProfile, eval_branch, unit_phase
from .construct import (
    ConstructionParams,
    build_generator,
    center_knots,
    choose_omega0,
    construct_f,
    f1_spec,
    f2_spec,
    example_f1,
    example_f2,
    example_generator,
    knots_for_interval,
    omega0_bound,
    periodic_spec,
)
from .roots import (
    CapExceeded,
    DecompositionError,
    PhaseVector,
    RootSet,
    SampledFunction,
    decompose,
    distinct_count,
    enumerate_roots,
    graded_phase_vectors,
    pd_verdict,
    phase_extract,
    root_candidate,
    root_residual,
    verify_root,
)
from .spectrum import (
    CosineSpectrum,
    PsdVerdict,
    atom_inverse_transform,
    bochner_check,
    bracket_lower_bound,
    gram_psd_oracle,
    gram_search,
    spectrum_of,
)
from .support import Interval, PeriodicRule, SpecError, SupportSpec, build_support_spec, sample_grid, sigma_of

__version__ = "0.1.0"
