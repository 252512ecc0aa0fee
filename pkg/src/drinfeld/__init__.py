"""Drinfeld modules over F_q[t]: Wieferich places, ordic valuations,
L-series, units and statistics."""

from .anderson import (MotiveMatrix, euler_factor_via_dual,
                       frobenius_power_matrix, motive_matrix)
from .checks import CheckResult, euler_place_checks, run_all, run_suite
from .fields import FqContext, fq_context
from .lseries import (LocalFactor, TaelmanUnit, TruncatedLSeries, exp_coeffs,
                      l_series, local_factor, log_coeffs, log_coeffs_padic,
                      lp_series, lp_value_at_1, padic_log, special_lvalue,
                      taelman_unit, twisted_apply, vanishing_order)
from .padic import PadicApprox, PrecisionError, pow_mod
from .poly import (NEG_INF, Place, Poly, RationalFunction, inverse_mod,
                   irreducible_count, is_irreducible, monic_polys, places,
                   places_up_to, poly_gcd, poly_xgcd, valuation)
from .ore import DrinfeldModel, OrePoly, is_torsion_point, smallest_h_place
from .parsing import (ParseError, model_str, parse_element, parse_model,
                      parse_place, parse_poly, poly_str, tpoly_str)
from .residue import (ResidueFieldContext, annihilator_mod, fitting_ideal,
                      residue_field, t_action_matrix, twisted_fitting)
from .search import (CheckpointMismatch, SearchError, SearchInterrupted,
                     SearchRun, VerificationError, resume, run_search,
                     search_wieferich, throughput_report)
from .stats import (CellResult, IndependenceReport, Universe, format_cell,
                    frequency_test, independence_test, sample_model,
                    stats_table, substream_seed, wieferich_indicator)
from .tpoly import TPoly
from .wieferich import (OrdicValuation, bounded_valuation, deformation_is_wieferich,
                        deformed_model, is_wieferich, lift_power_congruence,
                        ordic_valuation, wieferich_deg1, wieferich_linear_test)

__version__ = "0.1.0"
