"""Capacities of phase-covariant qubit dynamical maps.

Channel construction (direct parameters, time-local generators, memory
kernels, and classical mixtures of all three), one-shot and
entanglement-assisted classical capacities with closed-form and
brute-force routes, and trajectory sweeps with crossing detection.
"""

from .core import (
    BlochVector, ChannelValidityError, ChoiMatrix, DegenerateChannelError,
    DensityMatrix, KrausSet, PhaseCovariantChannel,
    apply, binary_entropy, channel_from_dict, choi, complementary_apply,
    covariance_check, entropy, gadc, hermitian_eig, is_cp, is_cp_linear,
    kraus, make_channel, mix, non_unitality, stationary_state,
)
from .dynamics import (
    AdmissibilityReport, EllParameterization, ExpDecay, GadcFamily,
    GeneratorSingularityError, GeneratorSpec, KernelComponent, KernelSpec,
    MixtureReport, SolverInstabilityError, Theorem1Report, Trajectories,
    convolution_identity_check, eigenvalues_from_rates, example1_kernel,
    gadc_generator, gadc_kernel, k_from_kernel, kernel_from_k,
    kernel_from_recipe, mixture_equivalence, single_function_kernel,
    theorem1_kernel, volterra_solve,
)
from .capacity import (
    CapacityPoint, CEObjective, HolevoSolve, capacity_bounds, ce_ad,
    ce_gadc, ce_objective, ce_unital, crossing_windows, gadc_parameters,
    holevo_gadc, holevo_unital, trajectory,
)
from .oracle import (
    Ensemble, OracleReport, ce_bruteforce, chi_bruteforce,
    holevo_of_ensemble, mutual_information,
)

__version__ = "0.1.0"
