"""Numerical laboratory for the ground-state energy of a polaron in a strong
magnetic field: product-ansatz energies in the lowest Landau level, the exact
effective 1D problem, a Coulomb-energy decomposition ledger, and certified
lower bounds for the projected quantized-field operator."""

from .certificate import (ConstantsLedger, CutoffParams, LowerBoundCertificate,
                          analytic_infimum_floor, block_coupling, block_error,
                          certificate_to_dict, certify_projected,
                          conditional_full_bound, coupling_v, default_cutoffs,
                          effective_infimum, kappa, kappa1, kappa2,
                          localization_error, rough_lower_formula,
                          total_coupling_weight)
from .decomposition import (DecompositionLedger, coulomb_D_product,
                            d_product_fourier, d_product_grid, d_product_real,
                            decompose, first_excited_radial, ground_radial,
                            kernel_remainder, kernel_remainder_coefficient,
                            log_kernel, log_kernel_far, log_kernel_near,
                            main_coefficient, offdiag_bound_check,
                            smooth_remainder_bound)
from .errors import (ConvergenceError, DomainTooSmallError, FitError,
                     InvalidFieldError, MagpolaronError, ParameterError,
                     ResolutionError)
from .grids import (DensityProfile, Field1D, Grid1D, centroid, density_fourier,
                    kinetic, mass, quartic, shift_field, standard_grid)
from .landau import (HIGHER_LEVEL_FACTOR, RadialTransverseDensity,
                     TransverseGaussian, effective_potential,
                     effective_potential_fourier, effective_potential_general,
                     lll_projector_kernel, projected_phase_factor,
                     transverse_kinetic, twisted_kernel, twisted_norm_bound,
                     twisted_norm_check)
from .oned import (SHARP_GN_Q4, OneDProblem, OneDSolution, WeightedProblem,
                   closed_form_energy, closed_form_minimizer,
                   distance_to_profile, gn_gap, gn_ratio, sharp_gn_constant,
                   solve_numeric, solve_weighted)
from .pekar import (AsymptoticFit, EnergyBreakdown, PekarProductState,
                    PhysParams, SweepRecord, coherent_infimum, fit_asymptotics,
                    pekar_energy, pekar_minimize, scaling_identity_check,
                    sweep, sweep_grid, trial_energy, trial_state)

__version__ = "0.1.0"
