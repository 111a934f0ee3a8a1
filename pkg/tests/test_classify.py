#!/usr/bin/env python3
"""
🧪 Tests for the classification report
"""

import json

import pytest

from src import classify
from src.classify import (
    has_eschenburg_ring,
    has_type_Er_shape,
    headline,
    is_type_Er,
    known_eschenburg_space,
    report,
    summary_row,
)
from src.errors import ConsistencyError
from src.families import cohomology_table, parse_params


@pytest.fixture
def n_report():
    """Report for N(1,1)(2,1)"""
    return report(parse_params("N(1,1)(2,1)"))


class TestPredicates:
    """Test type E_r and Eschenburg predicates"""

    @pytest.mark.parametrize("text,expected", [
        ("L(1,1)(1,3)", True),
        ("L(1,1)(1,1)", False),
        ("L(1,1)(2,1)", False),
        ("N(1,1)(2,1)", True),
        ("N(1,3)(2,1)", True),
        ("O(2,3:2)", True),
        ("O(1,1:1)", False),
        ("O(3,5:1)", True),
        ("M(1,1)(5,1)", False),
    ])
    def test_type_er(self, text, expected):
        """Test the verdict at known tuples"""
        verdict = is_type_Er(parse_params(text))
        assert bool(verdict) is expected
        assert verdict.clause

    def test_type_er_carries_r(self):
        """Test the verdict reports r"""
        assert is_type_Er(parse_params("N(1,3)(2,1)")).r == 35

    def test_eschenburg(self):
        """Test the Eschenburg ring predicate"""
        assert has_eschenburg_ring(parse_params("N(1,1)(2,1)"))
        assert has_eschenburg_ring(parse_params("O(2,3:2)"))
        assert not has_eschenburg_ring(parse_params("O(3,5:1)"))
        assert not has_eschenburg_ring(parse_params("L(1,1)(1,3)"))
        assert not has_eschenburg_ring(parse_params("M(1,1)(5,1)"))

    def test_known_eschenburg_space(self):
        """Test O(p, p +- 1 : 2)"""
        assert known_eschenburg_space(parse_params("O(2,3:2)"))
        assert known_eschenburg_space(parse_params("O(4,3:2)"))
        assert not known_eschenburg_space(parse_params("O(2,5:2)"))
        assert not known_eschenburg_space(parse_params("O(2,3:1)"))

    def test_shape(self):
        """Test the table shape check"""
        assert has_type_Er_shape(cohomology_table(parse_params("N(1,1)(2,1)")))
        assert not has_type_Er_shape(cohomology_table(parse_params("L(1,1)(2,1)")))
        assert not has_type_Er_shape(cohomology_table(parse_params("O(1,1:1)")))
        assert not has_type_Er_shape(cohomology_table(parse_params("M(1,1)(5,1)")))


class TestReport:
    """Test assembled reports"""

    def test_n_example(self, n_report):
        """Test N(1,1)(2,1) is type E_3 with an Eschenburg ring"""
        assert n_report.valid
        assert n_report.r == 3
        assert n_report.is_type_Er
        assert n_report.eschenburg_ring
        assert not n_report.known_eschenburg_space
        assert [str(g) for g in n_report.table.groups] == ["Z", "0", "Z", "0", "Z_3", "Z", "0", "Z"]
        assert len(n_report.certificates) == 2

    def test_large_n(self):
        """Test N(1,3)(2,1) has r = 35"""
        rep = report(parse_params("N(1,3)(2,1)"))
        assert rep.r == 35
        assert str(rep.table[4]) == "Z_35"

    def test_known_space(self):
        """Test O(2,3:2)"""
        rep = report(parse_params("O(2,3:2)"))
        assert rep.r == 5
        assert rep.eschenburg_ring and rep.known_eschenburg_space

    def test_invalid(self):
        """Test invalid tuples give a report instead of raising"""
        rep = report(parse_params("N(1,1)(3,1)"))
        assert rep.valid is False
        assert rep.table is None
        assert rep.errors[0]['message'] == "p+ even required"
        assert rep.to_dict()['groups'] == []

    def test_provenance(self, n_report):
        """Test every stated number has a source"""
        claims = {entry.claim for entry in n_report.provenance}
        assert {"r", "H^3", "H^4", "is_type_Er", "eschenburg_ring"} <= claims
        assert "generator criterion at degree 4" in claims
        assert all(entry.source for entry in n_report.provenance)

    def test_provenance_for_pi_level(self):
        """Test O with m = 1 cites the explicit map"""
        rep = report(parse_params("O(2,1:1)"))
        sources = [entry.source for entry in rep.provenance if entry.claim == "H^4"]
        assert sources == ["cokernel of pi* by the cyclicity criterion"]

    def test_to_dict_order(self, n_report):
        """Test the serialized key order is stable"""
        assert list(n_report.to_dict()) == [
            'family', 'params', 'valid', 'errors', 'groups', 'r', 'is_type_Er', 'eschenburg_ring',
            'known_eschenburg_space', 'ring_generators', 'ring_complete', 'provenance', 'ring_products',
            'ring_remarks', 'pi_star', 'certificates',
        ]

    def test_json_serializable(self, n_report):
        """Test reports survive a JSON round trip"""
        data = n_report.to_dict()
        assert json.loads(json.dumps(data)) == data
        assert data['certificates'][0]['input']['kappa'] == 4

    def test_shape_disagreement_is_consistency_error(self, monkeypatch):
        """Test the predicate is cross-checked against the table"""
        monkeypatch.setattr(classify, "has_type_Er_shape", lambda table: False)
        with pytest.raises(ConsistencyError):
            report(parse_params("N(1,1)(2,1)"))


class TestHeadline:
    """Test one-line verdicts"""

    @pytest.mark.parametrize("text,expected", [
        ("N(1,1)(2,1)", "type E_3, Eschenburg ring: yes"),
        ("L(1,1)(1,3)", "type E_2, Eschenburg ring: no"),
        ("L(1,1)(2,1)", "not type E_r; H^3 = Z_2"),
        ("O(1,1:1)", "not type E_r; H^3 = Z"),
        ("N(1,1)(3,1)", "invalid: p+ even required"),
    ])
    def test_headlines(self, text, expected):
        """Test headline strings"""
        assert headline(report(parse_params(text))) == expected


class TestSummaryRow:
    """Test summary table rows"""

    def test_n(self, n_report):
        """Test an N row"""
        row = summary_row(n_report)
        assert row.to_dict() == {
            'label': "N(1,1)(2,1)",
            'case': "N",
            'groups': "H^2 = Z, H^4 = Z_3, H^5 = Z",
            'generators': "x in H^2, y in H^5",
            'notes': "type E_3, r odd; Eschenburg ring",
        }

    def test_l_even(self):
        """Test the partial generator list"""
        row = summary_row(report(parse_params("L(1,1)(2,1)")))
        assert row.case == "L, p+ even"
        assert row.groups == "H^2 = Z, H^3 = Z_2, H^4 = Z_3, H^5 = Z + Z_2"
        assert row.generators == "partial: x in H^2, xi in H^3, y in H^5"
        assert row.notes == "not type E_r; r always odd; ring generators partial"

    def test_m(self):
        """Test the M note"""
        row = summary_row(report(parse_params("M(1,1)(5,1)")))
        assert row.groups == "H^4 = Z_3"
        assert row.generators == "y in H^4, z in H^7"
        assert row.notes == "not type E_r; same cohomology ring as an S^3-bundle over S^4"

    def test_o_known_space(self):
        """Test O(2,3:2)"""
        row = summary_row(report(parse_params("O(2,3:2)")))
        assert row.case == "O, m=2"
        assert row.notes == "type E_5, r odd; Eschenburg ring; known Eschenburg space"

    def test_degenerate(self):
        """Test det = 0 rows"""
        row = summary_row(report(parse_params("L(1,1)(1,1)")))
        assert row.notes == "not type E_r; degenerate: det = 0"
        assert row.generators.startswith("partial: ")

    def test_invalid(self):
        """Test invalid rows carry the headline"""
        row = summary_row(report(parse_params("N(1,1)(3,1)")))
        assert row.groups == ""
        assert row.notes == "invalid: p+ even required"
