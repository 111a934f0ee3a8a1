#!/usr/bin/env python3
"""
🌐 Cohomogeneity One Families L, M, N, O
Parameter grammar and restrictions, orbit cohomology, the free-part maps on H^3 whose
determinants give r = |H^4|, and the full graded cohomology with ring annotations.

Every manifold here is a double disk bundle over the two non-principal orbits G/K- and G/K+
of an S^3 x S^3 action, glued along the principal orbit G/H.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from .abelian import AbelianGroup, direct_sum, parse_group, with_coefficients
from .errors import ConsistencyError, InvalidInputError, InvalidParametersError, ParameterParseError
from .exactseq import (
    GeneratorCertificate,
    GeneratorLemmaInput,
    MayerVietorisInput,
    cyclic_lemma,
    generator_lemma_check,
    mv_kernel,
)
from .intlinalg import IntegerMatrix, determinant

logger = logging.getLogger("cohomog7.families")


class Family(str, Enum):
    L = "L"
    M = "M"
    N = "N"
    O = "O"


class Orbit(str, Enum):
    K_MINUS = "K-"
    K_PLUS = "K+"
    PRINCIPAL = "G/H"


PAIR_FAMILIES = (Family.L, Family.M, Family.N)

_PAIR_PATTERN = re.compile(
    r"^(?P<family>[LMN])\((?P<pm>[+-]?\d+),(?P<qm>[+-]?\d+)\),?\((?P<pp>[+-]?\d+),(?P<qp>[+-]?\d+)\)$"
)
_O_PATTERN = re.compile(r"^O\((?P<p>[+-]?\d+),(?P<q>[+-]?\d+)[:;](?:m=)?(?P<m>[+-]?\d+)\)$")


@dataclass(frozen=True)
class FamilyParams:
    """Raw integer parameters; p_minus..q_plus for L, M, N and p, q, m for O"""
    family: Family
    p_minus: Optional[int] = None
    q_minus: Optional[int] = None
    p_plus: Optional[int] = None
    q_plus: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'family', Family(self.family))

    @classmethod
    def pairs(cls, family: Union[Family, str], p_minus: int, q_minus: int, p_plus: int, q_plus: int) -> "FamilyParams":
        return cls(Family(family), p_minus=p_minus, q_minus=q_minus, p_plus=p_plus, q_plus=q_plus)

    @classmethod
    def o(cls, p: int, q: int, m: int) -> "FamilyParams":
        return cls(Family.O, p=p, q=q, m=m)

    @property
    def label(self) -> str:
        return format_params(self)

    @property
    def case(self) -> str:
        """Subfamily: 'p+ odd' / 'p+ even' for L, 'm=1' / 'm=2' for O, '' otherwise"""
        if self.family is Family.L and self.p_plus is not None:
            return "p+ even" if self.p_plus % 2 == 0 else "p+ odd"
        if self.family is Family.O and self.m is not None:
            return f"m={self.m}"
        return ""

    def values(self) -> Dict[str, int]:
        names = ('p_minus', 'q_minus', 'p_plus', 'q_plus') if self.family in PAIR_FAMILIES else ('p', 'q', 'm')
        return {name: getattr(self, name) for name in names}

    def to_dict(self) -> Dict[str, Any]:
        return {'label': self.label, 'family': self.family.value, **self.values()}


def parse_params(text: str, line: Optional[int] = None) -> FamilyParams:
    """Read 'L(p-,q-)(p+,q+)', 'M(..)(..)', 'N(..)(..)' or 'O(p,q:m)'; whitespace is ignored"""
    compact = re.sub(r"\s+", "", text)
    match = _PAIR_PATTERN.match(compact)
    if match:
        return FamilyParams.pairs(
            match.group('family'),
            int(match.group('pm')), int(match.group('qm')),
            int(match.group('pp')), int(match.group('qp')),
        )
    match = _O_PATTERN.match(compact)
    if match:
        return FamilyParams.o(int(match.group('p')), int(match.group('q')), int(match.group('m')))
    raise ParameterParseError(
        f"cannot parse {text.strip()!r}; expected L(p-,q-)(p+,q+), M(..)(..), N(..)(..) or O(p,q:m)",
        text=text, line=line
    )


def format_params(params: FamilyParams) -> str:
    if params.family is Family.O:
        return f"O({params.p},{params.q}:{params.m})"
    return f"{params.family.value}({params.p_minus},{params.q_minus})({params.p_plus},{params.q_plus})"


# Validation

@dataclass(frozen=True)
class ParameterViolation:
    rule: str
    message: str
    fields: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'rule': self.rule, 'message': self.message, 'fields': list(self.fields)}


def _shape_violations(params: FamilyParams) -> List[ParameterViolation]:
    if params.family in PAIR_FAMILIES:
        required, forbidden = ('p_minus', 'q_minus', 'p_plus', 'q_plus'), ('p', 'q', 'm')
    else:
        required, forbidden = ('p', 'q', 'm'), ('p_minus', 'q_minus', 'p_plus', 'q_plus')

    missing = tuple(name for name in required if getattr(params, name) is None)
    extra = tuple(name for name in forbidden if getattr(params, name) is not None)
    violations = []
    if missing:
        violations.append(ParameterViolation("shape", f"{params.family.value} needs {', '.join(missing)}", missing))
    if extra:
        violations.append(ParameterViolation("shape", f"{params.family.value} does not take {', '.join(extra)}", extra))
    return violations


def validate(params: FamilyParams) -> List[ParameterViolation]:
    """Every restriction the tuple breaks; an empty list means valid"""
    violations = _shape_violations(params)
    if violations:
        return violations

    if params.family is Family.O:
        circle = (('p', 'q'),)
    else:
        circle = (('p_minus', 'q_minus'), ('p_plus', 'q_plus'))

    for pair in circle:
        for name in pair:
            if getattr(params, name) == 0:
                violations.append(ParameterViolation("nonzero", f"{name} must be non-zero", (name,)))
        a, b = (getattr(params, name) for name in pair)
        if math.gcd(a, b) != 1:
            violations.append(ParameterViolation(
                "gcd", f"gcd({pair[0]}, {pair[1]}) = {math.gcd(a, b)}, must be 1", pair
            ))

    family = params.family
    if family is Family.L:
        for name in ('p_minus', 'q_minus'):
            if getattr(params, name) % 4 != 1:
                violations.append(ParameterViolation("congruence", f"{name} must be 1 mod 4", (name,)))
        if params.p_plus % 2 == 1 and params.q_plus % 2 == 0:
            violations.append(ParameterViolation(
                "parity", "q+ must be odd when p+ is odd (r = |p+^2 q-^2 - p-^2 q+^2| / 4 is an integer)", ('q_plus',)
            ))
    elif family is Family.M:
        for name in ('p_minus', 'q_minus', 'p_plus', 'q_plus'):
            if getattr(params, name) % 4 != 1:
                violations.append(ParameterViolation("congruence", f"{name} must be 1 mod 4", (name,)))
    elif family is Family.N:
        for name in ('p_minus', 'q_minus', 'q_plus'):
            if getattr(params, name) % 2 == 0:
                violations.append(ParameterViolation("parity", f"{name} must be odd", (name,)))
        if params.p_plus % 2 == 1:
            violations.append(ParameterViolation("parity", "p+ even required", ('p_plus',)))
    else:
        if params.m not in (1, 2):
            violations.append(ParameterViolation("m-value", f"m must be 1 or 2, got {params.m}", ('m',)))
        elif params.m == 2 and params.p % 2 == 1:
            violations.append(ParameterViolation("parity", "m = 2 requires p even", ('p',)))

    return violations


def is_valid(params: FamilyParams) -> bool:
    return not validate(params)


def require_valid(params: FamilyParams) -> FamilyParams:
    violations = validate(params)
    if violations:
        raise InvalidParametersError(params.label, violations)
    return params


# Orbit cohomology

def _groups(*symbols: str) -> Tuple[AbelianGroup, ...]:
    return tuple(parse_group(s) for s in symbols)


S3_X_S2 = _groups("Z", "0", "Z", "Z", "0", "Z")
S3 = _groups("Z", "0", "0", "Z")
RP3 = _groups("Z", "0", "Z_2", "Z")
S3_X_S3 = _groups("Z", "0", "0", "Z^2", "0", "0", "Z")
S3_X_RP3 = _groups("Z", "0", "Z_2", "Z^2", "0", "Z_2", "Z")
S3_X_LENS4 = _groups("Z", "0", "Z_4", "Z^2", "0", "Z_4", "Z")
L_ODD_K_PLUS = _groups("Z", "0", "Z_2", "Z", "0", "Z_2")
L_EVEN_K_PLUS = _groups("Z", "0", "Z_4", "Z + Z_2", "0", "Z_2")
N_K_MINUS = _groups("Z", "0", "Z + Z_2", "Z", "Z_2", "Z")
N_PRINCIPAL = _groups("Z", "0", "Z_2 + Z_4", "Z^2 + Z_2", "Z_2", "Z_2 + Z_4", "Z")


@dataclass(frozen=True)
class OrbitCohomology:
    orbit: Orbit
    groups: Tuple[AbelianGroup, ...]
    orientable: bool
    model: str = ""

    def degree(self, k: int) -> AbelianGroup:
        """H^k, trivial outside 0..dim"""
        if 0 <= k < len(self.groups):
            return self.groups[k]
        return AbelianGroup()

    def with_coefficients(self, m: int) -> List[AbelianGroup]:
        return with_coefficients(self.groups, m)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'orbit': self.orbit.value,
            'model': self.model,
            'orientable': self.orientable,
            'groups': [str(g) for g in self.groups],
        }


def orbit_cohomology(params: FamilyParams, orbit: Union[Orbit, str]) -> OrbitCohomology:
    """Integral cohomology of a non-principal or principal orbit, as tabulated data"""
    require_valid(params)
    try:
        orbit = Orbit(orbit)
    except ValueError:
        raise InvalidInputError(f"unknown orbit {orbit!r}; expected one of {[o.value for o in Orbit]}") from None

    family = params.family
    if family is Family.M:
        raise InvalidInputError("orbit tables for the M family are not tabulated", data={'family': 'M'})

    if orbit is Orbit.K_MINUS:
        if family is Family.N:
            return OrbitCohomology(orbit, N_K_MINUS, True, "G/K- of N")
        return OrbitCohomology(orbit, S3_X_S2, True, "S^3 x S^2")

    if orbit is Orbit.K_PLUS:
        if family is Family.O:
            if params.m == 1:
                return OrbitCohomology(orbit, S3, True, "S^3")
            return OrbitCohomology(orbit, RP3, True, "RP^3")
        if family is Family.L and params.case == "p+ odd":
            return OrbitCohomology(orbit, L_ODD_K_PLUS, False, "G/K+ of L, p+ odd")
        return OrbitCohomology(orbit, L_EVEN_K_PLUS, False, "G/K+ of L, p+ even")

    if family is Family.O:
        if params.m == 1:
            return OrbitCohomology(orbit, S3_X_S3, True, "S^3 x S^3")
        return OrbitCohomology(orbit, S3_X_RP3, True, "S^3 x RP^3")
    if family is Family.N:
        return OrbitCohomology(orbit, N_PRINCIPAL, True, "G/H of N")
    return OrbitCohomology(orbit, S3_X_LENS4, True, "S^3 x L_4(1,1)")


# Free-part maps on H^3 and the order of H^4

@dataclass(frozen=True)
class PiStarFactorization:
    """|det π*| = |det τ*| * |det μ*| / |det η*|"""
    det_eta_abs: int
    det_tau: int
    det_mu_abs: Fraction
    resulting_r: int

    def __post_init__(self):
        object.__setattr__(self, 'det_mu_abs', Fraction(self.det_mu_abs))
        value = abs(self.det_tau) * self.det_mu_abs / self.det_eta_abs
        if value.denominator != 1 or value != self.resulting_r:
            raise ConsistencyError(
                f"|{self.det_tau}| * {self.det_mu_abs} / {self.det_eta_abs} = {value} is not r = {self.resulting_r}",
                data={'det_tau': self.det_tau, 'det_eta_abs': self.det_eta_abs, 'det_mu_abs': str(self.det_mu_abs)}
            )

    @classmethod
    def from_scalars(cls, det_tau: int, det_eta_abs: int, det_mu_abs: Union[int, Fraction]) -> "PiStarFactorization":
        value = abs(det_tau) * Fraction(det_mu_abs) / det_eta_abs
        if value.denominator != 1:
            raise ConsistencyError(
                f"|det tau*| = {abs(det_tau)} is not divisible as required by {det_eta_abs}/{det_mu_abs}",
                data={'det_tau': det_tau}
            )
        return cls(det_eta_abs, det_tau, Fraction(det_mu_abs), int(value))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'det_eta_abs': self.det_eta_abs,
            'det_tau': self.det_tau,
            'det_mu_abs': str(self.det_mu_abs),
            'resulting_r': self.resulting_r,
        }


@dataclass(frozen=True)
class PiStarData:
    """level is 'pi' (matrix is π* itself), 'tau' (matrix is τ*, π* is reached through the factorization) or 'none'"""
    level: str
    matrix: Optional[IntegerMatrix] = None
    factorization: Optional[PiStarFactorization] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level,
            'matrix': self.matrix.to_rows() if self.matrix is not None else None,
            'factorization': self.factorization.to_dict() if self.factorization is not None else None,
        }


# (|det η*|, |det μ*|) per family case
FACTORIZATION_SCALARS: Dict[Tuple[Family, str], Tuple[int, int]] = {
    (Family.L, "p+ odd"): (4, 1),
    (Family.L, "p+ even"): (4, 4),
    (Family.M, ""): (8, 1),
    (Family.N, ""): (1, 1),
    (Family.O, "m=2"): (2, 2),
}


def _o_matrix(p: int, q: int) -> IntegerMatrix:
    """Columns (-q^2, p^2) and -(1, -1)"""
    return IntegerMatrix.from_columns([(-q * q, p * p), (-1, 1)])


def _tau_matrix(params: FamilyParams) -> IntegerMatrix:
    """Columns (-q-^2, p-^2) and (-q+^2, p+^2)"""
    if params.family is Family.O:
        return _o_matrix(params.p, params.q)
    return IntegerMatrix.from_columns([
        (-params.q_minus ** 2, params.p_minus ** 2),
        (-params.q_plus ** 2, params.p_plus ** 2),
    ])


def pi_star_matrix(params: FamilyParams) -> PiStarData:
    require_valid(params)
    if params.family is Family.O and params.m == 1:
        return PiStarData("pi", _o_matrix(params.p, params.q))

    tau = _tau_matrix(params)
    eta, mu = FACTORIZATION_SCALARS[(params.family, params.case)]
    factorization = PiStarFactorization.from_scalars(determinant(tau), eta, mu)
    if params.family is Family.M:
        return PiStarData("none", None, factorization)
    return PiStarData("tau", tau, factorization)


def closed_form_r(params: FamilyParams) -> int:
    """Order of H^4 from the per-family formula"""
    family = params.family
    if family is Family.O:
        return abs(params.p ** 2 - params.q ** 2)

    difference = params.p_plus ** 2 * params.q_minus ** 2 - params.p_minus ** 2 * params.q_plus ** 2
    if family is Family.L and params.case == "p+ odd":
        value = Fraction(abs(difference), 4)
    elif family is Family.M:
        value = Fraction(abs(difference), 8)
    else:
        value = Fraction(abs(difference))

    if value.denominator != 1:
        raise ConsistencyError(f"closed-form r = {value} for {params.label} is not an integer")
    return int(value)


def fourth_cohomology_order(params: FamilyParams) -> int:
    """r = |H^4| (0 when H^4 is infinite), checked against the determinant route"""
    require_valid(params)
    r = closed_form_r(params)
    data = pi_star_matrix(params)
    if data.level == "pi":
        via_matrix = abs(determinant(data.matrix))
    else:
        via_matrix = data.factorization.resulting_r

    if via_matrix != r:
        raise ConsistencyError(
            f"{params.label}: closed-form r = {r} but determinant route gives {via_matrix}",
            data={'closed_form': r, 'determinant_route': via_matrix, 'pi_star': data.to_dict()}
        )
    logger.debug("%s: r = %d", params.label, r)
    return r


# Graded cohomology and ring notes

@dataclass(frozen=True)
class RingGenerator:
    name: str
    degree: int
    description: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'degree': self.degree, 'description': self.description}


@dataclass(frozen=True)
class RingNotes:
    generators: Tuple[RingGenerator, ...] = ()
    products: Tuple[str, ...] = ()
    complete: bool = False
    remarks: Tuple[str, ...] = ()

    def generates(self, statement: str) -> bool:
        return statement in self.products

    def to_dict(self) -> Dict[str, Any]:
        return {
            'generators': [g.to_dict() for g in self.generators],
            'products': list(self.products),
            'complete': self.complete,
            'remarks': list(self.remarks),
        }


@dataclass(frozen=True)
class GradedCohomology:
    groups: Tuple[AbelianGroup, ...]
    ring_notes: RingNotes = field(default_factory=RingNotes)

    def __post_init__(self):
        object.__setattr__(self, 'groups', tuple(self.groups))
        if len(self.groups) != 8:
            raise InvalidInputError(f"a 7-manifold needs groups in degrees 0..7, got {len(self.groups)}")

    def __getitem__(self, k: int) -> AbelianGroup:
        return self.groups[k]

    def duality_violations(self) -> List[str]:
        """Poincaré duality and universal coefficient checks for a closed simply connected 7-manifold"""
        g = self.groups
        problems = []
        for k in (0, 7):
            if g[k] != AbelianGroup.free():
                problems.append(f"H^{k} = {g[k]}, expected Z")
        for k in (1, 6):
            if not g[k].is_trivial():
                problems.append(f"H^{k} = {g[k]}, expected 0")
        for k in range(8):
            if g[k].free_rank != g[7 - k].free_rank:
                problems.append(f"free rank of H^{k} ({g[k].free_rank}) differs from H^{7 - k} ({g[7 - k].free_rank})")
        for k in range(2, 7):
            if g[k].torsion != g[8 - k].torsion:
                problems.append(f"torsion of H^{k} ({g[k]}) differs from H^{8 - k} ({g[8 - k]})")
        return problems

    def nontrivial(self) -> List[Tuple[int, AbelianGroup]]:
        return [(k, g) for k, g in enumerate(self.groups) if not g.is_trivial()]

    def with_coefficients(self, m: int) -> List[AbelianGroup]:
        return with_coefficients(self.groups, m)

    def to_dict(self) -> Dict[str, Any]:
        return {'groups': [g.to_dict() for g in self.groups], 'ring_notes': self.ring_notes.to_dict()}


X = RingGenerator("x", 2, "generates H^2")
Y = RingGenerator("y", 5, "generates the free part of H^5")
XI = RingGenerator("xi", 3, "generates H^3 = Z_2")
Y4 = RingGenerator("y", 4, "generates H^4")
Z7 = RingGenerator("z", 7, "generates H^7")

X_SQUARED = "x^2 generates H^4"
XY = "xy generates H^7"


def _ring_notes(params: FamilyParams, r: int) -> RingNotes:
    family, case = params.family, params.case
    if family is Family.M:
        generators: Tuple[RingGenerator, ...] = (Y4, Z7)
        products: Tuple[str, ...] = ()
        complete = True
        remarks: Tuple[str, ...] = ("same cohomology ring as an S^3-bundle over S^4",)
    elif family is Family.L and case == "p+ even":
        generators = (X, XI, Y)
        products = (X_SQUARED, XY)
        complete = False
        remarks = ("whether x, xi and y generate the whole ring is unknown",)
    else:
        generators = (X, Y)
        products = (X_SQUARED, XY)
        complete = True
        remarks = ()
        if family is Family.L:
            remarks = ("x^2 generates H^4 by mod 2 reduction; the generator criterion fails at degree 4",)

    if r == 0:
        return RingNotes(generators, (), False, ("degenerate: det = 0",))
    return RingNotes(generators, products, complete, remarks)


def mayer_vietoris_input(params: FamilyParams, kappa: int = 4) -> MayerVietorisInput:
    """Free-part map on H^{κ-1} with the cyclicity hypotheses read off the orbit tables (t = 2)"""
    require_valid(params)
    if params.family is Family.M:
        raise InvalidInputError("orbit tables for the M family are not tabulated", data={'family': 'M'})

    k_minus = orbit_cohomology(params, Orbit.K_MINUS)
    k_plus = orbit_cohomology(params, Orbit.K_PLUS)
    data = pi_star_matrix(params)
    return MayerVietorisInput(
        free_map=data.matrix,
        source_is_cyclic_below=k_minus.degree(kappa - 2).is_cyclic(),
        target_degree_groups_trivial=k_minus.degree(kappa).is_trivial() and k_plus.degree(kappa).is_trivial(),
    )


def cohomology_table(params: FamilyParams) -> GradedCohomology:
    """H^0..H^7 with ring annotations"""
    r = fourth_cohomology_order(params)
    data = pi_star_matrix(params)
    free_part_map = data.matrix if data.matrix is not None else _tau_matrix(params)

    h3 = mv_kernel(MayerVietorisInput(free_part_map))
    if params.family is Family.O and params.m == 1:
        h4 = cyclic_lemma(mayer_vietoris_input(params))
        if h4 != AbelianGroup.cyclic(r):
            raise ConsistencyError(f"{params.label}: cokernel of π* is {h4}, expected Z_{r}")
    else:
        h4 = AbelianGroup.cyclic(r)

    Z, zero, Z2 = AbelianGroup.free(), AbelianGroup(), AbelianGroup.cyclic(2)
    family = params.family
    if family is Family.M:
        groups = (Z, zero, zero, h3, h4, zero, zero, Z)
    elif family is Family.L and params.case == "p+ even":
        groups = (Z, zero, Z, direct_sum(h3, Z2), h4, direct_sum(Z, Z2), zero, Z)
    else:
        groups = (Z, zero, Z, h3, h4, Z, zero, Z)

    table = GradedCohomology(groups, _ring_notes(params, r))
    problems = table.duality_violations()
    if problems:
        raise ConsistencyError(f"{params.label}: table fails duality checks", data={'problems': problems})
    return table


# Generator certificates, t = 2

# (s at κ = 4, s at κ = 7): coefficient of γ in i-*(α) for α = x and α = y
GENERATOR_COEFFICIENTS: Dict[Tuple[Family, str], Tuple[int, int]] = {
    (Family.L, "p+ odd"): (2, 2),
    (Family.L, "p+ even"): (1, 4),
    (Family.N, ""): (1, 4),
}


def generator_certificates(params: FamilyParams) -> List[Tuple[GeneratorLemmaInput, GeneratorCertificate]]:
    """Generator criterion at κ = 4 (α = x) and κ = 7 (α = y) where the inputs are known"""
    key = (params.family, params.case)
    table = cohomology_table(params)
    if key not in GENERATOR_COEFFICIENTS or table[4].free_rank:
        return []

    k_minus = orbit_cohomology(params, Orbit.K_MINUS)
    k_plus = orbit_cohomology(params, Orbit.K_PLUS)
    n = int(k_plus.degree(2).order())

    results = []
    for kappa, s in zip((4, 7), GENERATOR_COEFFICIENTS[key]):
        data = GeneratorLemmaInput(
            t=2,
            kappa=kappa,
            n=n,
            h_kappa_X=table[kappa],
            s=s,
            torsion_orders_T=k_minus.degree(kappa - 2).torsion,
        )
        results.append((data, generator_lemma_check(data)))
    return results
