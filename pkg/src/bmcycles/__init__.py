"""Exact cycle calculus for graded modules and Serre-weight bookkeeping."""

from .arith import CyclotomicField, CyclotomicNumber, PrimeField, RationalField, parse_field
from .bmweights import (
    FormalCycleCombo, GL2ResidualDescriptor, HodgeTypeGLn, SerreWeightGLn, TableKey, bm_verify,
    component_report_gl2, is_serre_weight, ledger_solve, leq, lifts, weight_set_gl2,
)
from .cycles import (
    Cycle, check_additivity, check_associativity, cut_by_regular, cycle_of, eval_at_closed_point,
    multiplicity_along, product_cycle,
)
from .errors import BMCError
from .groebner import Ideal, eliminate, groebner_basis, in_radical, intersect, quotient
from .hilbert import HilbertSeries, SubquotientModule, hilbert_series, multiplicity
from .modrep import (
    BrauerCharacter, SerreWeightGL2, WeightMultiset, character_principal_series,
    character_steinberg, character_sym, character_weight, composition_factors_explicit,
    decompose,
)
from .poly import GREVLEX, LEX, MonomialOrder, Polynomial, Ring, parse_ring
from .primes import PrimeCertificate, minimal_primes

__version__ = "0.1.0"
