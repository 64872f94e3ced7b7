"""Gauss-Hermite and Gauss-Legendre rules by a modified Halley march on the
normal-form ODE, with a double-double reference oracle."""

from ._jit import backend
from .dd import DDArray, DoubleDouble
from .errors import (BracketingIncomplete, DomainViolation, EnumerationIncomplete, HalleyQuadError,
                     HopTooLarge, LengthMismatch, NormalizationFailure, PoleEncountered, SweepCapExceeded)
from .halley import (OdeProblem, RTrend, SweepConfig, find_all_zeros, halley_step, iterate_to_zero,
                     modified_halley_step, plan_next_guess, sweep_guess)
from .hermite import HermiteProblem, compute_hermite_rule, first_guess_hermite, hermite_weights
from .legendre import (LegendreProblem, compute_legendre_rule, legendre_first_guess, legendre_weights,
                       transformed_step, transformed_sweep)
from .oracle import CompareReport, oracle_eval, oracle_rule, oracle_weights, oracle_zeros, relative_error_report
from .rule import Family, IterationTrace, QuadratureRule, RuleStats, Termination
from .taylor import TaylorExpansion, advance_center, evaluate_pair, hermite_coeffs, legendre_coeffs


def compute_rule(family, n: int, **kwargs) -> QuadratureRule:
    """Dispatch to :func:`compute_hermite_rule` or :func:`compute_legendre_rule`."""
    fam = Family.parse(family)
    if fam is Family.HERMITE:
        return compute_hermite_rule(n, **kwargs)
    return compute_legendre_rule(n, **kwargs)


__version__ = "0.1.0"
