import hashlib
import json

import pytest

from homnovikov import QQ, StructureBundle, make_algebra, make_operator, specfile, validate
from homnovikov.cli import main
from homnovikov.errors import HomNovikovError

DUAL = {
    "field": "Q",
    "dim": 2,
    "products": {"dot": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]]},
}
RC = {"field": "Q", "dim": 2, "products": {"mu": [[0, 0, 0, "1"], [0, 1, 1, "1"]]}}
TWIST = {
    "field": "Q",
    "dim": 2,
    "products": {"mu": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]]},
    "maps": {"alpha": [[0, 0, "1"], [1, 1, "-1"]]},
}
SQUARE = {"field": "Q", "dim": 2, "products": {"mu": [[0, 0, 1, "1"]]}}
HEIS = {"field": "Q", "dim": 3, "products": {"br": [[0, 1, 2, "1"], [1, 0, 2, "-1"]]}}
QUAD = {
    "field": "Q",
    "dim": 2,
    "products": {"mu": [[0, 0, 1, "1"]]},
    "maps": {"alpha": [[0, 0, "1"], [1, 1, "1"]]},
    "forms": {"B": [[0, 1, "1"], [1, 0, "1"]]},
}


@pytest.fixture
def spec(tmp_path):
    def write(doc, name="a.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestCheck:
    def test_pass(self, spec, capsys):
        code, out, _ = run(capsys, "check", spec(DUAL), "--kind", "novikov")
        assert code == 0 and "left-symmetry: ok" in out

    def test_fail_reports_witness(self, spec, capsys):
        code, doc = run_json(capsys, "check", spec(RC), "--kind", "novikov")
        assert code == 1 and doc["verdict"] == "fail"
        failed = [c for c in doc["checks"] if not c["holds"]]
        assert failed[0]["identity"] == "right-commute"
        assert failed[0]["witness"]["tuple"] == [0, 0, 1]

    def test_malformed_scalar(self, spec, capsys):
        bad = {"field": "Q", "dim": 1, "products": {"mu": [[0, 0, 0, "1/0"]]}}
        code, _, err = run(capsys, "check", spec(bad), "--kind", "novikov")
        assert code == 2 and "error" in err

    def test_numeric_scalar_rejected(self, spec, capsys):
        bad = {"field": "Q", "dim": 1, "products": {"mu": [[0, 0, 0, 1]]}}
        assert run(capsys, "check", spec(bad), "--kind", "novikov")[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "check", str(tmp_path / "none.json"), "--kind", "novikov")[0] == 2

    def test_unknown_kind(self, spec, capsys):
        assert run(capsys, "check", spec(DUAL), "--kind", "jordan")[0] == 2

    def test_needs_kind_or_identity(self, spec, capsys):
        assert run(capsys, "check", spec(DUAL))[0] == 2

    def test_missing_role(self, spec, capsys):
        assert run(capsys, "check", spec(DUAL), "--kind", "hom-novikov")[0] == 2

    def test_single_identity(self, spec, capsys):
        code, doc = run_json(capsys, "check", spec(RC), "--identity", "left-symmetry")
        assert code == 0 and [c["identity"] for c in doc["checks"]] == ["left-symmetry"]

    def test_field_override(self, spec, capsys):
        code, doc = run_json(capsys, "check", spec(TWIST), "--kind", "novikov", "--field", "GF:5")
        assert code == 0

    def test_random_trials_are_seeded(self, spec, capsys):
        argv = ("check", spec(RC), "--identity", "right-commute", "--random-trials", "5", "--seed", "3")
        code, first = run_json(capsys, *argv)
        _, second = run_json(capsys, *argv)
        assert code == 1 and first == second
        rnd = [c for c in first["checks"] if c.get("method") == "random"]
        assert rnd and not rnd[0]["holds"] and rnd[0]["witness"]["tuple"] is None

    def test_report_is_byte_identical(self, spec, capsys):
        path = spec(RC)
        a = run(capsys, "check", path, "--kind", "novikov", "--json")[1]
        b = run(capsys, "check", path, "--kind", "novikov", "--json")[1]
        assert a == b

    def test_out_file(self, spec, tmp_path, capsys):
        out = tmp_path / "report.json"
        code, stdout, _ = run(capsys, "check", spec(DUAL), "--kind", "novikov", "--out", str(out))
        doc = json.loads(out.read_text())
        assert code == 0 and doc["verdict"] == "pass"
        assert doc["provenance"]["input_digest"] == "sha256:" + hashlib.sha256(json.dumps(DUAL).encode()).hexdigest()

    def test_empty_algebra(self, spec, capsys):
        code, doc = run_json(capsys, "check", spec({"field": "Q", "dim": 0, "products": {"mu": []}}), "--kind", "novikov")
        assert code == 0 and all(c["holds"] for c in doc["checks"])


class TestConstruct:
    def test_yau_twist_round_trip(self, spec, tmp_path, capsys):
        out = tmp_path / "tw.json"
        code, _, _ = run(capsys, "construct", spec(TWIST), "yau-twist", "--out", str(out))
        assert code == 0
        doc = specfile.load(out)
        bundle = specfile.bind(doc)
        assert validate(bundle, "hom-novikov").passed
        assert specfile.loads(specfile.dumps(doc)) == doc
        assert run(capsys, "check", str(out), "--kind", "hom-novikov")[0] == 0

    def test_untwist_recovers_original(self, spec, tmp_path, capsys):
        out = tmp_path / "tw.json"
        back = tmp_path / "back.json"
        run(capsys, "construct", spec(TWIST), "yau-twist", "--out", str(out))
        assert run(capsys, "construct", str(out), "involutive-untwist", "--out", str(back))[0] == 0
        A = specfile.bind(specfile.load(back)).product
        assert A.c.tolist() == specfile.bind(specfile.loads(json.dumps(DUAL))).product.c.tolist()

    def test_precondition_failure(self, spec, capsys):
        doc = dict(TWIST, maps={"alpha": [[0, 0, "1"]]})
        code, _, err = run(capsys, "construct", spec(doc), "involutive-untwist")
        assert code == 2 and "involution" in err

    def test_json_embeds_output(self, spec, capsys):
        code, doc = run_json(capsys, "construct", spec(DUAL), "commutator")
        assert code == 0 and doc["construction_output"]["dim"] == 2

    def test_tensor_needs_with(self, spec, capsys):
        assert run(capsys, "construct", spec(DUAL), "tensor-np")[0] == 2

    def test_gd_lambda_negative_scalar(self, spec, capsys):
        doc = dict(DUAL, maps={"d": [[1, 1, "1"]]})
        code, report = run_json(capsys, "construct", spec(doc), "gd-lambda", "--lambda", "-1/2")
        assert code == 0 and report["predicted"] == "novikov"

    def test_unknown_construction(self, spec, capsys):
        assert run(capsys, "construct", spec(DUAL), "nonsense")[0] == 2


class TestAnalyze:
    def test_center(self, spec, capsys):
        code, doc = run_json(capsys, "analyze", spec(SQUARE), "center")
        assert code == 0
        assert doc["analysis"]["center"] == {"dim": 1, "basis": [["0", "1"]]}

    def test_lcs(self, spec, capsys):
        code, doc = run_json(capsys, "analyze", spec(HEIS), "lcs")
        assert code == 0 and doc["analysis"]["lcs_dims"] == [3, 1, 0]

    def test_lcs_of_commutator(self, spec, capsys):
        code, doc = run_json(capsys, "analyze", spec(SQUARE), "lcs", "--commutator")
        assert doc["analysis"]["lcs_dims"] == [2, 0]

    def test_nilpotency(self, spec, capsys):
        code, doc = run_json(capsys, "analyze", spec(QUAD), "nilpotency")
        assert code == 0
        assert doc["analysis"]["derived_in_center"] and doc["analysis"]["two_step"]
        assert doc["analysis"]["scope"] == "exact over Q"

    def test_nilpotency_finite_field_scope(self, spec, capsys):
        code, doc = run_json(capsys, "analyze", spec(QUAD), "nilpotency", "--field", "GF:3")
        assert doc["analysis"]["scope"] == "finite-field evidence only"

    def test_nilpotency_bad_input(self, spec, capsys):
        assert run(capsys, "analyze", spec(SQUARE), "nilpotency")[0] == 2


class TestDemo:
    def test_laurent(self, capsys):
        code, out, _ = run(capsys, "demo", "laurent", "--c", "1/2", "--window", "0..6", "--suite", "hom-novikov-star2")
        assert code == 0

    def test_laurent_defaults(self, capsys):
        code, doc = run_json(capsys, "demo", "laurent", "--c", "1/2")
        assert code == 0
        assert {c["suite"] for c in doc["checks"]} == {"novikov-star1", "hom-novikov-star2", "gd2", "hom-assoc-bullet"}

    def test_indexed(self, capsys):
        code, doc = run_json(capsys, "demo", "indexed", "--q", "1", "--s", "1", "--beta", "2", "--window", "-5..5", "--suite", "hom-np")
        assert code == 0 and doc["checks"][0]["window"] == [-5, 5]

    def test_indexed_unity(self, capsys):
        assert run(capsys, "demo", "indexed", "--suite", "unity", "--suite", "del2")[0] == 0

    def test_restriction_is_an_error(self, capsys):
        assert run(capsys, "demo", "laurent", "--window", "-3..3", "--suite", "hom-novikov-star2")[0] == 2

    def test_derivation_fails(self, capsys):
        code, doc = run_json(capsys, "demo", "laurent", "--suite", "del-derivation")
        assert code == 1
        assert doc["checks"][0]["witness"]["tuple"] == ["t", "t"]
        assert doc["checks"][0]["witness"]["lhs"] == {"t^2": "1"}
        assert doc["checks"][0]["witness"]["rhs"] == {"t^2": "2"}

    def test_unknown_suite(self, capsys):
        assert run(capsys, "demo", "laurent", "--suite", "np")[0] == 2

    def test_bad_window(self, capsys):
        assert run(capsys, "demo", "laurent", "--window", "0-6")[0] == 2


class TestEnumerate:
    def test_dual_numbers_gf3(self, spec, capsys):
        doc = dict(DUAL, field="GF:3")
        code, report = run_json(capsys, "enumerate", spec(doc))
        # 1 -> 1, eps -> k eps (k in GF(3)), plus the zero map
        assert code == 0 and report["analysis"]["count"] == 4

    def test_rejects_rationals(self, spec, capsys):
        assert run(capsys, "enumerate", spec(DUAL))[0] == 2


class TestSpecFile:
    def test_round_trip(self):
        A = make_algebra(2, [(0, 1, 1, "1/2")], QQ, "A")
        doc = specfile.from_bundle(StructureBundle(star=A, alpha=make_operator(2, [(0, 0, 3)])))
        again = specfile.loads(specfile.dumps(doc))
        assert again == doc

    @pytest.mark.parametrize(
        "bad",
        [
            {"field": "Q"},
            {"field": "Q", "dim": 1, "extra": 1},
            {"field": "Q", "dim": 1, "products": {"mu": [[0, 0, 1, "1"]]}},
            {"field": "GF:4", "dim": 1},
            {"field": "Q", "dim": 65},
            {"field": "Q", "dim": 1, "maps": {"a": [[0, "0", "1"]]}},
        ],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(HomNovikovError):
            specfile.loads(json.dumps(bad))

    def test_digest_is_stable(self):
        raw = json.dumps(DUAL).encode()
        assert specfile.digest(raw) == specfile.digest(raw)
