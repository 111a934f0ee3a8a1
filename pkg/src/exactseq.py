#!/usr/bin/env python3
"""
🔗 Exact Sequence Tools
Executable forms of the two decision tools used on double disk bundles X = D(B-) ∪ D(B+):
the cyclicity criterion for H^κ(X) read off a square free-part map, and the generator
criterion deciding whether x ⌣ α generates H^κ(X).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from .abelian import AbelianGroup
from .errors import HypothesesNotMetError, InvalidInputError
from .intlinalg import IntegerMatrix, cokernel, determinant, kernel_rank

logger = logging.getLogger("cohomog7.exactseq")


@dataclass(frozen=True)
class MayerVietorisInput:
    """
    free_map is π* = π-* - π+* restricted to free parts,
    free(H^{κ-1}(B-) + H^{κ-1}(B+)) -> free(H^{κ-1}(∂D(B))).
    The two flags assert the facts the cyclicity criterion needs:
    H^{κ-t}(B-) is cyclic, and H^κ(B-), H^κ(B+) are both trivial.
    """
    free_map: IntegerMatrix
    source_is_cyclic_below: bool = True
    target_degree_groups_trivial: bool = True


@dataclass(frozen=True)
class GeneratorLemmaInput:
    t: int
    kappa: int
    n: int
    h_kappa_X: AbelianGroup
    s: int
    torsion_orders_T: Tuple[int, ...] = ()
    surjects_onto_B_plus: bool = True
    i_plus_star_zero_at_kappa: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'torsion_orders_T', tuple(self.torsion_orders_T))
        if self.t < 1:
            raise InvalidInputError(f"fiber disk dimension t must be positive, got {self.t}")
        if self.n < 1:
            raise InvalidInputError(f"order n of H^t(B+) must be >= 1, got {self.n}")
        if self.kappa <= self.t:
            raise InvalidInputError(f"kappa must exceed t, got kappa={self.kappa}, t={self.t}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            't': self.t,
            'kappa': self.kappa,
            'n': self.n,
            'h_kappa_X': str(self.h_kappa_X),
            's': self.s,
            'torsion_orders_T': list(self.torsion_orders_T),
            'surjects_onto_B_plus': self.surjects_onto_B_plus,
            'i_plus_star_zero_at_kappa': self.i_plus_star_zero_at_kappa,
        }


@dataclass(frozen=True)
class GeneratorCertificate:
    condition1: bool
    condition2: bool
    condition3: bool
    surjectivity: bool
    narrative: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def verdict(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3 and self.surjectivity

    def to_dict(self) -> Dict[str, Any]:
        return {
            'condition1': self.condition1,
            'condition2': self.condition2,
            'condition3': self.condition3,
            'surjectivity': self.surjectivity,
            'verdict': self.verdict,
            'narrative': list(self.narrative),
        }


def _require_square(m: IntegerMatrix):
    if not m.is_square():
        raise InvalidInputError(
            f"free-part map must be square (equal ranks), got {m.rows}x{m.cols}",
            data={'rows': m.rows, 'cols': m.cols}
        )


def cyclic_lemma(mv: MayerVietorisInput) -> AbelianGroup:
    """H^κ(X) = Z_r with r = |det(free_map)|, provided the hypotheses hold"""
    _require_square(mv.free_map)
    if not mv.source_is_cyclic_below:
        raise HypothesesNotMetError("H^{κ-t}(B-) is cyclic")
    if not mv.target_degree_groups_trivial:
        raise HypothesesNotMetError("H^κ(B-) and H^κ(B+) are trivial")

    group = cokernel(mv.free_map)
    r = abs(determinant(mv.free_map))
    if group != AbelianGroup.cyclic(r):
        # SNF cokernel wins over |det|
        logger.warning("cokernel %s of %s is not Z_%d", group, mv.free_map.to_rows(), r)
    return group


def mv_kernel(mv: MayerVietorisInput) -> AbelianGroup:
    """The kernel of free_map as a free group"""
    return AbelianGroup.free(kernel_rank(mv.free_map))


def generator_lemma_check(data: GeneratorLemmaInput) -> GeneratorCertificate:
    """Decide whether x ⌣ α generates H^κ(X) for x generating H^t(X)"""
    h = data.h_kappa_X
    if not h.is_cyclic():
        raise InvalidInputError(f"H^{data.kappa}(X) = {h} is not cyclic", data=data.to_dict())

    narrative: List[str] = []
    if data.n == 1:
        narrative.append("n = 1: H^t(B+) is trivial, so Condition 3 reduces to |s| = 1 in the free case")

    condition1 = not h.is_trivial() and data.i_plus_star_zero_at_kappa
    if h.is_trivial():
        narrative.append(f"Condition 1 fails: H^{data.kappa}(X) is trivial")
    elif not data.i_plus_star_zero_at_kappa:
        narrative.append(f"Condition 1 fails: i+* on H^{data.kappa} is not the zero homomorphism")
    else:
        narrative.append(f"Condition 1 holds: H^{data.kappa}(X) = {h} is non-trivial cyclic and i+* vanishes on it")

    if h.is_finite():
        order = h.order()
        bad = [d for d in data.torsion_orders_T if math.gcd(d, order) != 1]
        condition2 = not bad
        if bad:
            narrative.append(f"Condition 2 fails: torsion orders {bad} share a factor with |H^{data.kappa}(X)| = {order}")
        else:
            narrative.append(f"Condition 2 holds: torsion orders {list(data.torsion_orders_T)} are prime to {order}")
    else:
        condition2 = True
        narrative.append(f"Condition 2 holds: H^{data.kappa}(X) is infinite")

    if h.free_rank == 1:
        condition3 = abs(data.s) == data.n
        relation = "=" if condition3 else "!="
        narrative.append(
            f"Condition 3 {'holds' if condition3 else 'fails'}: H^{data.kappa}(X) = Z and |s| = {abs(data.s)} {relation} n = {data.n}"
        )
    else:
        order = h.order()
        condition3 = math.gcd(data.s, order) == 1
        narrative.append(
            f"Condition 3 {'holds' if condition3 else 'fails'}: gcd(s, {order}) = {math.gcd(data.s, order)}"
        )

    surjectivity = data.surjects_onto_B_plus
    narrative.append(
        f"i+*: H^{data.t}(X) -> H^{data.t}(B+) {'is' if surjectivity else 'is not'} surjective"
    )

    certificate = GeneratorCertificate(condition1, condition2, condition3, surjectivity, tuple(narrative))
    logger.debug("generator check at kappa=%d: verdict %s", data.kappa, certificate.verdict)
    return certificate
