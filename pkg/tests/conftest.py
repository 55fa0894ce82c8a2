from pathlib import Path

import pytest

from app.harness.document import document_parser
from app.harness.runner import discourse_runner
from app.models.entity import Gender, GrammaticalNumber
from app.models.mention import Agreement, GrammaticalFunction, Mention, MentionKind

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
RULES = ROOT / "rules"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def rules_dir() -> Path:
    return RULES


@pytest.fixture
def run_text():
    """Parse and execute an inline document."""

    def _run(text: str, rules=None):
        return discourse_runner.execute(document_parser.parse(text), rules, base_dir=FIXTURES)

    return _run


@pytest.fixture
def context_before(run_text):
    """The input context of the utterance labelled ``label``."""

    def _context(text: str, label: str, rules=None):
        run = run_text(text, rules)
        return next(step.before for step in run.steps if step.utterance.label == label)

    return _context


@pytest.fixture
def pronoun():
    def _pronoun(surface="he", gf=GrammaticalFunction.SUBJECT, gender=Gender.MASC, stressed=False):
        return Mention(
            surface=surface,
            kind=MentionKind.PRONOUN,
            stressed=stressed,
            gf=gf,
            agreement=Agreement(gender=gender, number=GrammaticalNumber.SG),
        )

    return _pronoun


@pytest.fixture
def fixture_run():
    """Execute a document from the fixture corpus."""

    def _run(name: str, rules=None):
        path = FIXTURES / name
        return discourse_runner.execute(document_parser.load(path), rules, base_dir=path.parent)

    return _run


@pytest.fixture
def fixture_step(fixture_run):
    def _step(name: str, label: str):
        return next(step for step in fixture_run(name).steps if step.utterance.label == label)

    return _step
