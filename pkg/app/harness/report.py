"""Report construction and rendering (text via Jinja2, structured via JSON)."""

from pathlib import Path
from typing import Iterable, List, Optional

from jinja2 import Environment, FileSystemLoader

from app.models.discourse import Context
from app.models.resolution import DischargeOutcome, ResolutionResult, UtteranceResolution
from app.models.utterance import LogicalForm, Polarity, Utterance
from app.schemas.report import (
    ClassReport,
    ContextSnapshot,
    DischargeReport,
    DiscourseRun,
    ErrorReport,
    ExpectationResult,
    PronounReport,
    Report,
    UtteranceReport,
)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"


# Custom Jinja2 filters
def braces_filter(values: Iterable[str]) -> str:
    return "{" + ", ".join(values) + "}"


def listing_filter(values: Iterable[str]) -> str:
    values = list(values)
    return ", ".join(values) if values else "-"


template_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)
template_env.filters["braces"] = braces_filter
template_env.filters["listing"] = listing_filter


def render_lf(lf: LogicalForm) -> str:
    prefix = "¬" if lf.polarity == Polarity.NEG else ""
    args = []
    for role, mention in lf.args:
        value = "+".join(mention.realized()) if mention.resolved else f"?{mention.surface}"
        args.append(f"{role}={value}")
    return f"{prefix}{lf.predicate}({', '.join(args)})"


class ReportBuilder:
    def build(
        self,
        run: DiscourseRun,
        expectations: Optional[List[ExpectationResult]] = None,
        asymmetry: Optional[bool] = None,
        source: str = "",
    ) -> Report:
        utterances: List[UtteranceReport] = []
        for step in run.steps:
            utterances.append(self._utterance(step.utterance, step.resolution, step.after))
            for variant in step.variants:
                base = run.document.variants_of(step.utterance.label)
                utterance = next(v for v in base if v.label == variant.label)
                utterances.append(self._utterance(utterance, variant, None))
        return Report(
            title=run.document.title,
            source=source,
            utterances=utterances,
            expectations=expectations or [],
            asymmetry=asymmetry,
        )

    def summary(self, report: Report) -> Report:
        """The report without derivation traces and context snapshots."""
        utterances = [
            u.model_copy(
                update={
                    "trace": [],
                    "context": None,
                    "pronouns": [p.model_copy(update={"trace": []}) for p in u.pronouns],
                }
            )
            for u in report.utterances
        ]
        return report.model_copy(update={"utterances": utterances})

    def render_text(self, report: Report, trace: bool = False) -> str:
        template = template_env.get_template("report.txt.j2")
        return template.render(report=report, trace=trace)

    def render_structured(self, report: Report) -> str:
        return report.model_dump_json(indent=2) + "\n"

    def snapshot(self, ctx: Context) -> ContextSnapshot:
        state = ctx.attention
        center = state.center
        return ContextSnapshot(
            local=list(state.local),
            salience=state.salience.render(),
            center=center.entity if center else None,
            chain_length=center.chain_length if center else None,
            transition=center.transition.value if center else None,
            background=sorted(state.background),
            facts=sorted(str(fact) for fact in ctx.model.facts),
        )

    def _utterance(
        self, utterance: Utterance, resolution: UtteranceResolution, after: Optional[Context]
    ) -> UtteranceReport:
        return UtteranceReport(
            label=utterance.label,
            index=utterance.index,
            variant_of=utterance.variant_of,
            segment_initial=utterance.segment_initial,
            registered=render_lf(resolution.resolved.lf),
            pronouns=[self._pronoun(utterance.label, r) for r in resolution.results],
            errors=[
                ErrorReport(target=f"{utterance.label}.{e.role}", error=e.error, detail=e.detail)
                for e in resolution.errors
            ],
            trace=[str(step) for step in resolution.trace],
            context=self.snapshot(after) if after is not None else None,
        )

    def _pronoun(self, label: str, result: ResolutionResult) -> PronounReport:
        return PronounReport(
            target=f"{label}.{result.role}",
            role=result.role,
            surface=result.pronoun.surface,
            stressed=result.pronoun.stressed,
            candidates=sorted(result.candidates),
            classes=[
                ClassReport(
                    preference_class=c.preference_class.value,
                    order=c.order.render(),
                    strength=c.strength.value,
                    note=c.note,
                )
                for c in result.conclusions
            ],
            base=result.base.order.render(),
            final=result.final_order.render(),
            value=sorted(result.value),
            weak_pairs=[f"{x}>{y}" for x, y in sorted(result.base.weak_pairs)],
            garden_path=result.base.garden_path,
            felicity=result.felicity.value,
            discharge=self._discharge(result.discharge),
            trace=[str(step) for step in result.trace],
        )

    @staticmethod
    def _discharge(outcome: Optional[DischargeOutcome]) -> Optional[DischargeReport]:
        if outcome is None:
            return None
        return DischargeReport(
            status=outcome.status.value,
            contrast=str(outcome.contrasting_proposition) if outcome.contrasting_proposition else None,
            support=outcome.support.describe() if outcome.support else None,
            accommodations=[record.describe() for record in outcome.accommodations],
        )


report_builder = ReportBuilder()
