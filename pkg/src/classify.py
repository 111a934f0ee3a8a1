#!/usr/bin/env python3
"""
🏷️ Classification
Cohomology type E_r and Eschenburg-ring predicates, and the assembled per-manifold report
with a provenance entry for every number it states.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .abelian import AbelianGroup
from .errors import ConsistencyError
from .exactseq import GeneratorCertificate, GeneratorLemmaInput
from .families import (
    X_SQUARED,
    Family,
    FamilyParams,
    GradedCohomology,
    PiStarData,
    cohomology_table,
    fourth_cohomology_order,
    generator_certificates,
    pi_star_matrix,
    require_valid,
    validate,
)

logger = logging.getLogger("cohomog7.classify")

R_FORMULAS = {
    (Family.L, "p+ odd"): "order formula |p+^2 q-^2 - p-^2 q+^2| / 4 (L, p+ odd)",
    (Family.L, "p+ even"): "order formula |p+^2 q-^2 - p-^2 q+^2| (L, p+ even)",
    (Family.M, ""): "order formula |p+^2 q-^2 - p-^2 q+^2| / 8 (M)",
    (Family.N, ""): "order formula |p-^2 q+^2 - p+^2 q-^2| (N)",
    (Family.O, "m=1"): "order formula |p^2 - q^2| (O, m = 1)",
    (Family.O, "m=2"): "order formula |p^2 - q^2| (O, m = 2)",
}


@dataclass(frozen=True)
class TypeErVerdict:
    value: bool
    r: int
    clause: str

    def __bool__(self) -> bool:
        return self.value


def is_type_Er(params: FamilyParams) -> TypeErVerdict:
    """Cohomology type E_r: L with p+ odd and r != 0, every N, O unless |p| = |q| = 1"""
    require_valid(params)
    r = fourth_cohomology_order(params)
    family = params.family

    if family is Family.L:
        if params.case == "p+ even":
            return TypeErVerdict(False, r, "L with p+ even has Z_2 summands in H^3 and H^5")
        if r == 0:
            return TypeErVerdict(False, r, "L with p+ odd and p+^2 q-^2 - p-^2 q+^2 = 0 has H^4 = Z")
        return TypeErVerdict(True, r, "L with p+ odd and p+^2 q-^2 - p-^2 q+^2 != 0")
    if family is Family.N:
        return TypeErVerdict(True, r, "every member of N")
    if family is Family.O:
        if abs(params.p) == 1 and abs(params.q) == 1:
            return TypeErVerdict(False, r, "O with |p| = |q| = 1 has H^3 = Z")
        return TypeErVerdict(True, r, "O with |p| and |q| not both 1")
    return TypeErVerdict(False, r, "M is 2-connected, so H^2 = 0")


def has_eschenburg_ring(params: FamilyParams) -> bool:
    """Integral cohomology ring of an Eschenburg space"""
    require_valid(params)
    if params.family is Family.N:
        return abs(params.p_minus ** 2 * params.q_plus ** 2 - params.p_plus ** 2 * params.q_minus ** 2) != 1
    if params.family is Family.O:
        return params.p % 2 == 0 or params.q % 2 == 0
    return False


def known_eschenburg_space(params: FamilyParams) -> bool:
    """O(p, p +- 1 : 2)"""
    return params.family is Family.O and params.m == 2 and abs(params.p - params.q) == 1


def has_type_Er_shape(table: GradedCohomology) -> bool:
    """(Z, 0, Z, 0, Z_r, Z, 0, Z) with 2 <= r < inf, complete generators and x^2 generating H^4"""
    Z, zero = AbelianGroup.free(), AbelianGroup()
    h4 = table[4]
    shape = (
        table[0] == Z and table[1] == zero and table[2] == Z and table[3] == zero
        and table[5] == Z and table[6] == zero and table[7] == Z
    )
    return (
        shape
        and h4.is_finite() and h4.is_cyclic() and h4.order() >= 2
        and table.ring_notes.complete and table.ring_notes.generates(X_SQUARED)
    )


@dataclass(frozen=True)
class Provenance:
    claim: str
    source: str

    def to_dict(self) -> Dict[str, str]:
        return {'claim': self.claim, 'source': self.source}


@dataclass(frozen=True)
class ClassificationReport:
    params: FamilyParams
    valid: bool
    errors: Tuple[Dict[str, Any], ...] = ()
    table: Optional[GradedCohomology] = None
    r: Optional[int] = None
    is_type_Er: bool = False
    eschenburg_ring: bool = False
    known_eschenburg_space: bool = False
    provenance: Tuple[Provenance, ...] = ()
    pi_star: Optional[PiStarData] = None
    certificates: Tuple[Tuple[GeneratorLemmaInput, GeneratorCertificate], ...] = field(default_factory=tuple)

    @property
    def label(self) -> str:
        return self.params.label

    def to_dict(self) -> Dict[str, Any]:
        notes = self.table.ring_notes if self.table is not None else None
        return {
            'family': self.params.family.value,
            'params': self.label,
            'valid': self.valid,
            'errors': list(self.errors),
            'groups': [g.to_dict() for g in self.table.groups] if self.table is not None else [],
            'r': self.r,
            'is_type_Er': self.is_type_Er,
            'eschenburg_ring': self.eschenburg_ring,
            'known_eschenburg_space': self.known_eschenburg_space,
            'ring_generators': [g.to_dict() for g in notes.generators] if notes else [],
            'ring_complete': notes.complete if notes else False,
            'provenance': [p.to_dict() for p in self.provenance],
            'ring_products': list(notes.products) if notes else [],
            'ring_remarks': list(notes.remarks) if notes else [],
            'pi_star': self.pi_star.to_dict() if self.pi_star is not None else None,
            'certificates': [
                {'input': data.to_dict(), **certificate.to_dict()} for data, certificate in self.certificates
            ],
        }


def _provenance(params: FamilyParams, r: int, data: PiStarData, verdict: TypeErVerdict,
                eschenburg: bool, certificates) -> List[Provenance]:
    entries = [Provenance("r", R_FORMULAS[(params.family, params.case)])]
    if data.level == "pi":
        entries.append(Provenance("r", "|det| of the explicit free-part map pi* on H^3"))
        entries.append(Provenance("H^4", "cokernel of pi* by the cyclicity criterion"))
    else:
        f = data.factorization
        entries.append(Provenance(
            "r", f"|det tau*| * |det mu*| / |det eta*| = {abs(f.det_tau)} * {f.det_mu_abs} / {f.det_eta_abs}"
        ))
        entries.append(Provenance("H^4", "Z_r from the checked factorization"))
    entries.append(Provenance("H^3", "kernel of the free-part map on H^3"))
    if params.family is Family.N:
        entries.append(Provenance("groups", "tabulated groups for N; its G/K- tables break the cyclicity criterion"))
    entries.append(Provenance("is_type_Er", verdict.clause))

    if params.family is Family.N:
        entries.append(Provenance(
            "eschenburg_ring", "N with |p-^2 q+^2 - p+^2 q-^2| != 1; automatic for valid N since r is odd and >= 3"
        ))
    elif params.family is Family.O:
        entries.append(Provenance("eschenburg_ring", "O with p or q even" if eschenburg else "O with p and q odd"))
    else:
        entries.append(Provenance("eschenburg_ring", f"{params.family.value} is never an Eschenburg ring candidate"))

    if known_eschenburg_space(params):
        entries.append(Provenance("known_eschenburg_space", "O(p, p +- 1 : 2) is an Eschenburg space"))

    for data_in, certificate in certificates:
        outcome = "holds" if certificate.verdict else "fails"
        entries.append(Provenance(f"generator criterion at degree {data_in.kappa}", f"{outcome} with s = {data_in.s}, n = {data_in.n}"))
    return entries


def report(params: FamilyParams) -> ClassificationReport:
    """Full report; invalid tuples give valid = False instead of raising"""
    violations = validate(params)
    if violations:
        logger.info("%s is invalid: %s", params.label, "; ".join(v.message for v in violations))
        return ClassificationReport(params=params, valid=False, errors=tuple(v.to_dict() for v in violations))

    r = fourth_cohomology_order(params)
    table = cohomology_table(params)
    data = pi_star_matrix(params)
    verdict = is_type_Er(params)
    eschenburg = has_eschenburg_ring(params) and verdict.value
    certificates = tuple(generator_certificates(params))

    if table[4] != AbelianGroup.cyclic(r):
        raise ConsistencyError(f"{params.label}: H^4 = {table[4]} but r = {r}")
    if verdict.value != has_type_Er_shape(table):
        raise ConsistencyError(
            f"{params.label}: type E_r verdict {verdict.value} disagrees with the table shape",
            data={'groups': [str(g) for g in table.groups]}
        )
    if eschenburg and r % 2 == 0:
        raise ConsistencyError(f"{params.label}: Eschenburg ring claimed with even r = {r}")

    return ClassificationReport(
        params=params,
        valid=True,
        table=table,
        r=r,
        is_type_Er=verdict.value,
        eschenburg_ring=eschenburg,
        known_eschenburg_space=known_eschenburg_space(params),
        provenance=tuple(_provenance(params, r, data, verdict, eschenburg, certificates)),
        pi_star=data,
        certificates=certificates,
    )


def headline(rep: ClassificationReport) -> str:
    """One-line verdict for console output"""
    if not rep.valid:
        return "invalid: " + "; ".join(e['message'] for e in rep.errors)
    if rep.is_type_Er:
        return f"type E_{rep.r}, Eschenburg ring: {'yes' if rep.eschenburg_ring else 'no'}"
    return f"not type E_r; H^3 = {rep.table[3]}"


@dataclass(frozen=True)
class SummaryRow:
    label: str
    case: str
    groups: str
    generators: str
    notes: str

    COLUMNS = ('label', 'case', 'groups', 'generators', 'notes')

    def to_dict(self) -> Dict[str, str]:
        return {name: getattr(self, name) for name in self.COLUMNS}


def summary_row(rep: ClassificationReport) -> SummaryRow:
    params = rep.params
    family_case = params.family.value + (f", {params.case}" if params.case else "")
    if not rep.valid:
        return SummaryRow(rep.label, family_case, "", "", headline(rep))

    notes_obj = rep.table.ring_notes
    groups = ", ".join(f"H^{k} = {g}" for k, g in rep.table.nontrivial() if 0 < k < 7)
    generators = ", ".join(f"{g.name} in H^{g.degree}" for g in notes_obj.generators)
    if not notes_obj.complete:
        generators = f"partial: {generators}"

    notes: List[str] = []
    if rep.is_type_Er:
        notes.append(f"type E_{rep.r}, r {'even' if rep.r % 2 == 0 else 'odd'}")
    else:
        notes.append("not type E_r")
    if params.family is Family.L and params.case == "p+ even":
        notes.append("r always odd; ring generators partial")
    if rep.r == 0:
        notes.append("degenerate: det = 0")
    if params.family is Family.M:
        notes.append("same cohomology ring as an S^3-bundle over S^4")
    if rep.eschenburg_ring:
        notes.append("Eschenburg ring")
    if rep.known_eschenburg_space:
        notes.append("known Eschenburg space")
    return SummaryRow(rep.label, family_case, groups, generators, "; ".join(notes))
