import json

from click.testing import CliRunner

from app.cli import EXIT_ERROR, EXIT_EXPECTATIONS, cli
from app.harness.document import document_parser
from tests.conftest import FIXTURES, RULES

HIT = str(FIXTURES / "hit.disc")


def invoke(*args):
    return CliRunner().invoke(cli, [str(a) for a in args])


class TestRunCommand:
    def test_default_command_is_run(self):
        result = invoke(HIT)
        assert result.exit_code == 0
        assert "U2.Subj := {Bill} ok" in result.output

    def test_explicit_run_with_trace(self):
        result = invoke("run", HIT, "--trace")
        assert result.exit_code == 0
        assert "| REVERSE" in result.output

    def test_check_passes(self):
        result = invoke(HIT, FIXTURES / "tommy.disc", "--check", "--jobs", 2)
        assert result.exit_code == 0

    def test_check_fails(self, tmp_path):
        path = tmp_path / "wrong.disc"
        path.write_text(
            "entity John masc sg PERSON\nentity Bill masc sg PERSON\n"
            "utterance U1 pred=see Subj=John:name Obj=Bill:name\n"
            "utterance U2 pred=leave Subj=?he:pron:masc:sg\n"
            "expect U2.Subj = Bill\n",
            encoding="utf-8",
        )
        result = invoke(path, "--check")
        assert result.exit_code == EXIT_EXPECTATIONS
        assert "FAIL U2.Subj" in result.output

    def test_structured_single_file(self):
        result = invoke(HIT, "--report", "structured")
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["passed"] is True
        assert report["utterances"][1]["pronouns"][0]["value"] == ["Bill"]

    def test_structured_many_files(self):
        result = invoke(HIT, FIXTURES / "home.disc", "--report", "structured")
        assert [r["title"] for r in json.loads(result.output)] == [
            "John hit Bill. Then he was injured.",
            "John hit Bill. Mary told him to go home.",
        ]

    def test_extra_rules(self):
        result = invoke(FIXTURES / "republican_norep.disc", "--rules", RULES / "republican.rules", "--trace")
        assert result.exit_code == 0
        assert "REP" in result.output

    def test_parse_error_exits_with_error(self, tmp_path):
        path = tmp_path / "broken.disc"
        path.write_text("entity John masc sg PERSON\n", encoding="utf-8")
        result = invoke(path)
        assert result.exit_code == EXIT_ERROR
        assert "DslSyntaxError" in result.output

    def test_bad_json_keeps_other_reports(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"title": "no utterances", "entities": [{"gender": "masc"}]}', encoding="utf-8")
        result = invoke("run", path, HIT)
        assert result.exit_code == EXIT_ERROR
        assert "error: DslSyntaxError" in result.output
        assert "U2.Subj := {Bill} ok" in result.output

    def test_missing_file(self):
        assert invoke(FIXTURES / "nope.disc").exit_code != 0


class TestGenerateCommand:
    def test_writes_documents(self, tmp_path):
        result = invoke("generate", "--seed", 7, "--count", 3, tmp_path)
        assert result.exit_code == 0
        paths = sorted(tmp_path.glob("*.disc"))
        assert [p.name for p in paths] == [f"generated-7-00{i}.disc" for i in (1, 2, 3)]
        for path in paths:
            assert document_parser.load(path).utterances

    def test_same_seed_same_documents(self, tmp_path):
        invoke("generate", "--seed", 3, "--count", 2, tmp_path / "a")
        invoke("generate", "--seed", 3, "--count", 2, tmp_path / "b")
        for name in ("generated-3-001.disc", "generated-3-002.disc"):
            assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()


class TestRulesCommand:
    def test_renders_canonical_rules(self):
        result = invoke("rules", RULES / "hit.rules")
        assert result.exit_code == 0
        assert result.output.startswith("rule HIT")
        assert "synonym" in result.output

    def test_bad_rule_file(self, tmp_path):
        path = tmp_path / "bad.rules"
        path.write_text("rule X: a(X) ~> b(Y).\n", encoding="utf-8")
        result = invoke("rules", path)
        assert result.exit_code == EXIT_ERROR
        assert "error:" in result.output
