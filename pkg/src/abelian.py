#!/usr/bin/env python3
"""
🧮 Finitely Generated Abelian Groups
Invariant-factor normal form, direct sums, and the universal coefficient helpers
used to move between integral and mod-m cohomology.
"""

import logging
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import zip_longest
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

from sympy import factorint

from .errors import InvalidInputError, ParameterParseError

logger = logging.getLogger("cohomog7.abelian")

Order = Union[int, float]

_SUMMAND = re.compile(r"^(?:Z\^(?P<rank>\d+)|Z_\{?(?P<mod>\d+)\}?|(?P<free>Z)|(?P<zero>0))$")


def _invariant_factors(finite_factors: Iterable[int]) -> Tuple[int, ...]:
    """Combine cyclic orders (each >= 2) into an ascending divisor chain"""
    prime_powers: Dict[int, List[int]] = defaultdict(list)
    for d in finite_factors:
        for prime, exponent in factorint(d).items():
            prime_powers[prime].append(prime ** exponent)

    columns = [sorted(powers, reverse=True) for powers in prime_powers.values()]
    largest_first = [math.prod(row) for row in zip_longest(*columns, fillvalue=1)]
    return tuple(reversed(largest_first))


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z_{d1} + ... + Z_{dk} with d1 | d2 | ... | dk and every di >= 2"""
    free_rank: int = 0
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'torsion', tuple(self.torsion))
        if self.free_rank < 0:
            raise InvalidInputError(f"free rank must be non-negative, got {self.free_rank}")
        for d in self.torsion:
            if d < 2:
                raise InvalidInputError(f"torsion entries must be >= 2, got {d}; use normalize()")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise InvalidInputError(f"torsion {list(self.torsion)} is not a divisor chain; use normalize()")

    # Constructors

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls()

    @classmethod
    def free(cls, rank: int = 1) -> "AbelianGroup":
        return cls(free_rank=rank)

    @classmethod
    def cyclic(cls, r: int) -> "AbelianGroup":
        """Z_r with Z_0 = Z and Z_1 = 0"""
        return normalize([r])

    # Queries

    def order(self) -> Order:
        """Number of elements, math.inf when the free rank is positive"""
        if self.free_rank:
            return math.inf
        return math.prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_cyclic(self) -> bool:
        """Trivial, Z, or a single Z_d"""
        if self.free_rank == 0:
            return len(self.torsion) <= 1
        return self.free_rank == 1 and not self.torsion

    def factors(self) -> List[int]:
        """Cyclic orders that rebuild this group under normalize (0 stands for Z)"""
        return [0] * self.free_rank + list(self.torsion)

    # Universal coefficients

    def tensor_cyclic(self, m: int) -> "AbelianGroup":
        """G ⊗ Z_m"""
        if m < 0:
            raise InvalidInputError(f"coefficient modulus must be non-negative, got {m}")
        if m == 0:
            return self
        return normalize([m] * self.free_rank + [math.gcd(d, m) for d in self.torsion])

    def tor_cyclic(self, m: int) -> "AbelianGroup":
        """Tor(G, Z_m)"""
        if m < 0:
            raise InvalidInputError(f"coefficient modulus must be non-negative, got {m}")
        if m == 0:
            return AbelianGroup()
        return normalize([math.gcd(d, m) for d in self.torsion])

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        return {'free_rank': self.free_rank, 'torsion': list(self.torsion), 'symbol': str(self)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def normalize(raw_factors: Sequence[int]) -> AbelianGroup:
    """Normal form of the direct sum of Z_{f} over raw_factors (Z_0 = Z, Z_1 = 0)"""
    free_rank = 0
    finite = []
    for f in raw_factors:
        if f < 0:
            raise InvalidInputError(f"cyclic orders must be non-negative, got {f}", data={'factors': list(raw_factors)})
        if f == 0:
            free_rank += 1
        elif f > 1:
            finite.append(f)

    return AbelianGroup(free_rank=free_rank, torsion=_invariant_factors(finite))


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    factors: List[int] = []
    for group in groups:
        factors.extend(group.factors())
    return normalize(factors)


def with_coefficients(groups: Sequence[AbelianGroup], m: int) -> List[AbelianGroup]:
    """H^k(X; Z_m) = H^k(X) ⊗ Z_m + Tor(H^{k+1}(X), Z_m) from an integral cohomology list"""
    result = []
    for k, group in enumerate(groups):
        above = groups[k + 1] if k + 1 < len(groups) else AbelianGroup()
        result.append(direct_sum(group.tensor_cyclic(m), above.tor_cyclic(m)))
    logger.debug("coefficients Z_%d: %s", m, [str(g) for g in result])
    return result


def parse_group(text: str) -> AbelianGroup:
    """Inverse of str(): accepts '0', 'Z', 'Z^2', 'Z_2', 'Z + Z_2', ... in any order"""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ParameterParseError("empty group string", text=text)

    factors: List[int] = []
    for summand in compact.split("+"):
        match = _SUMMAND.match(summand)
        if not match:
            raise ParameterParseError(f"cannot read summand {summand!r} of group {text!r}", text=text)
        if match.group('rank') is not None:
            factors.extend([0] * int(match.group('rank')))
        elif match.group('mod') is not None:
            factors.append(int(match.group('mod')))
        elif match.group('free') is not None:
            factors.append(0)
    return normalize(factors)
