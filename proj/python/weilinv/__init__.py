"""Invariants of Weil representations of finite quadratic modules."""

from ._weilinv import (
    ComputationError,
    Module,
    ParseError,
    check_tables,
    dimension as _dimension,
    integral_basis as _integral_basis,
    invariants_mod as _invariants_mod,
    normalize_symbol,
    oracle_dimension as _oracle_dimension,
    run_cli,
    tables,
)

__all__ = [
    "ComputationError",
    "Module",
    "ParseError",
    "check_tables",
    "dimension",
    "integral_basis",
    "invariants_mod",
    "module",
    "normalize_symbol",
    "oracle_dimension",
    "run_cli",
    "tables",
]


def module(m):
    """A Module from a genus symbol, a Gram matrix (list of rows) or a Module."""
    if isinstance(m, Module):
        return m
    if isinstance(m, str):
        return Module.from_symbol(m)
    return Module.from_gram([list(r) for r in m])


def dimension(m, prime=None, local=True):
    return _dimension(module(m), prime, local)


def invariants_mod(m, prime=None):
    return _invariants_mod(module(m), prime)


def integral_basis(m, local=True):
    return _integral_basis(module(m), local)


def oracle_dimension(m, bound=100000):
    return _oracle_dimension(module(m), bound)
