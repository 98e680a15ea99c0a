"""Compensated accumulation for the Neumann series evaluators."""
from typing import Iterable, Union

Number = Union[float, complex]

def two_sum(u: float, v: float):
    # Error free transformation: u + v == s + t exactly.
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)

class CompensatedSum:
    """
    Running Neumaier sum of real or complex terms.
    Real and imaginary parts carry separate correction words.
    """
    __slots__ = ('_re', '_re_err', '_im', '_im_err')

    def __init__(self, start: Number = 0.0):
        self._re, self._re_err = float(getattr(start, 'real', start)), 0.0
        self._im, self._im_err = float(getattr(start, 'imag', 0.0)), 0.0

    def add(self, term: Number) -> "CompensatedSum":
        re = float(getattr(term, 'real', term))
        im = float(getattr(term, 'imag', 0.0))
        self._re, err = two_sum(self._re, re)
        self._re_err += err
        if im:
            self._im, err = two_sum(self._im, im)
            self._im_err += err
        return self

    def extend(self, terms: Iterable[Number]) -> "CompensatedSum":
        for term in terms:
            self.add(term)
        return self

    @property
    def real(self) -> float:
        return self._re + self._re_err

    @property
    def imag(self) -> float:
        return self._im + self._im_err

    def value(self) -> complex:
        return complex(self.real, self.imag)

def compensated_sum(terms: Iterable[Number]) -> complex:
    return CompensatedSum().extend(terms).value()
