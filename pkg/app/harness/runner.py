from pathlib import Path
from typing import List, Optional, Tuple, Union

from app.core.exceptions import DiscourseError
from app.engine.attention import AttentionEngine, attention_engine
from app.engine.focus import FocusEngine, check_asymmetry, focus_engine
from app.engine.rule_parser import rule_parser
from app.harness.report import report_builder
from app.models.discourse import Context
from app.models.resolution import ResolutionError, ResolutionResult, UtteranceResolution
from app.models.rule import RuleBook
from app.models.utterance import Utterance
from app.schemas.document import DiscourseDocument, Expectation
from app.schemas.report import DiscourseRun, DiscourseStep, ExpectationResult, Report
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("runner")

Counterpart = Tuple[str, ResolutionResult, ResolutionResult]


class DiscourseRunner:
    def __init__(
        self,
        focus: Optional[FocusEngine] = None,
        attention: Optional[AttentionEngine] = None,
    ):
        self.focus = focus or focus_engine
        self.attention = attention or attention_engine

    def rule_book(
        self,
        document: DiscourseDocument,
        rules: Optional[RuleBook] = None,
        base_dir: Optional[Union[str, Path]] = None,
    ) -> RuleBook:
        """Inline rules, then referenced rule files, then ``rules``."""
        book = RuleBook()
        if document.rule_text.strip():
            book = rule_parser.parse(document.rule_text, source="<inline>")
        base = Path(base_dir) if base_dir else Path(".")
        book = rule_parser.load_all([base / path for path in document.rule_files], book)
        if rules is not None:
            book = book.merge(rules)
        return book

    def execute(
        self,
        document: DiscourseDocument,
        rules: Optional[RuleBook] = None,
        base_dir: Optional[Union[str, Path]] = None,
    ) -> DiscourseRun:
        """
        Fold resolve-then-advance over the utterances.

        Every pronoun is resolved against the context before its utterance
        is registered. Resolution errors are recorded on the step and the
        run continues.
        """
        book = self.rule_book(document, rules, base_dir)
        ctx = Context.initial(document.entities)
        steps: List[DiscourseStep] = []

        for utterance in document.utterances:
            resolution = self._resolve(ctx, utterance, book)
            variants = [self._resolve(ctx, v, book) for v in document.variants_of(utterance.label)]
            try:
                after = self.focus.apply_accommodations(ctx, resolution.accommodations)
                after = self.attention.advance(after, resolution.resolved)
            except DiscourseError as exc:
                logger.warning(f"{utterance.label}: context not advanced: {exc.detail}")
                resolution = self._with_error(resolution, "*", utterance.label, exc)
                after = ctx
            steps.append(
                DiscourseStep(
                    utterance=utterance,
                    before=ctx,
                    resolution=resolution,
                    after=after,
                    variants=variants,
                )
            )
            ctx = after

        logger.info(f"Ran {len(steps)} utterances of '{document.title or 'untitled'}'")
        return DiscourseRun(document=document, rules=book, steps=steps)

    def run(
        self,
        document: DiscourseDocument,
        rules: Optional[RuleBook] = None,
        base_dir: Optional[Union[str, Path]] = None,
        source: str = "",
    ) -> Report:
        executed = self.execute(document, rules, base_dir)
        return report_builder.build(
            executed,
            expectations=self.check_expectations(executed),
            asymmetry=self.asymmetry(executed),
            source=source,
        )

    def counterpart_positions(self, run: DiscourseRun) -> List[Counterpart]:
        """(position, unstressed, stressed) for each base/variant pronoun pair."""
        pairs: List[Counterpart] = []
        for step in run.steps:
            for variant in step.variants:
                for result in step.resolution.results:
                    other = variant.result(result.role)
                    if other is None or other.pronoun.stressed == result.pronoun.stressed:
                        continue
                    unstressed, stressed = (other, result) if result.pronoun.stressed else (result, other)
                    pairs.append((f"{step.utterance.label}/{variant.label}.{result.role}", unstressed, stressed))
        return pairs

    def counterpart_pairs(self, run: DiscourseRun) -> List[Tuple[ResolutionResult, ResolutionResult]]:
        return [(unstressed, stressed) for _, unstressed, stressed in self.counterpart_positions(run)]

    def asymmetry(self, run: DiscourseRun) -> Optional[bool]:
        pairs = self.counterpart_pairs(run)
        return check_asymmetry(pairs) if pairs else None

    def check_expectations(self, run: DiscourseRun) -> List[ExpectationResult]:
        return [self._check(run, expectation) for expectation in run.document.expectations]

    def _check(self, run: DiscourseRun, expectation: Expectation) -> ExpectationResult:
        resolution = run.resolution(expectation.utterance)
        result = resolution.result(expectation.role) if resolution else None
        if result is None:
            detail = "no resolution"
            if resolution is not None:
                detail = next(
                    (f"{e.error}: {e.detail}" for e in resolution.errors if e.role == expectation.role),
                    detail,
                )
            return ExpectationResult(target=expectation.target, passed=False, failures=[detail])

        failures: List[str] = []
        if expectation.value is not None and frozenset(expectation.value) != result.value:
            failures.append(f"value {','.join(sorted(result.value))} != {','.join(expectation.value)}")
        if expectation.felicity is not None and expectation.felicity != result.felicity:
            failures.append(f"felicity {result.felicity.value} != {expectation.felicity.value}")
        if expectation.discharge is not None:
            actual = result.discharge.status.value if result.discharge else "none"
            if actual != expectation.discharge.value:
                failures.append(f"discharge {actual} != {expectation.discharge.value}")
        if expectation.garden_path is not None and expectation.garden_path != result.base.garden_path:
            failures.append(f"garden-path {str(result.base.garden_path).lower()}")
        if expectation.weak is not None and expectation.weak != bool(result.base.weak_pairs):
            failures.append(f"weak {str(bool(result.base.weak_pairs)).lower()}")
        return ExpectationResult(target=expectation.target, passed=not failures, failures=failures)

    def _resolve(self, ctx: Context, utterance: Utterance, rules: RuleBook) -> UtteranceResolution:
        try:
            return self.focus.resolve_utterance(ctx, utterance, rules)
        except DiscourseError as exc:
            logger.warning(f"{utterance.label}: {type(exc).__name__}: {exc.detail}")
            bare = UtteranceResolution(label=utterance.label, resolved=self._stripped(utterance))
            return self._with_error(bare, "*", utterance.label, exc)

    @staticmethod
    def _stripped(utterance: Utterance) -> Utterance:
        """The utterance without its unresolved mentions."""
        unresolved = [role for role, m in utterance.lf.args if not m.resolved]
        if not unresolved:
            return utterance
        return utterance.with_lf(utterance.lf.without(unresolved)).model_copy(update={"incomplete": True})

    @staticmethod
    def _with_error(
        resolution: UtteranceResolution, role: str, surface: str, exc: DiscourseError
    ) -> UtteranceResolution:
        error = ResolutionError(role=role, surface=surface, error=type(exc).__name__, detail=exc.detail)
        return resolution.model_copy(update={"errors": resolution.errors + (error,)})


discourse_runner = DiscourseRunner()
