from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.config import Settings, settings as default_settings
from app.core.exceptions import UnresolvedMention
from app.core.order import Pair, StrictPartialOrder
from app.models.discourse import AttentionalState, CenterRecord, CenterTransition, Context
from app.models.mention import GrammaticalFunction
from app.models.utterance import LogicalForm, Utterance
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("attention")


def _require_resolved(lf: LogicalForm) -> None:
    for role, mention in lf.args:
        if not mention.resolved:
            raise UnresolvedMention(f"{role} '{mention.surface}' in {lf.predicate} is unresolved")


class AttentionEngine:
    """Salience dynamics: GF ORDER, CENTER and EXP CENTER over successive utterances."""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings

    def gf_buckets(self, lf: LogicalForm) -> Dict[GrammaticalFunction, List[str]]:
        buckets: Dict[GrammaticalFunction, List[str]] = {}
        for entity_id in lf.realized():
            buckets.setdefault(lf.gf_of(entity_id), []).append(entity_id)
        return buckets

    def project_salience(
        self, lf: LogicalForm, center: Optional[CenterRecord] = None
    ) -> StrictPartialOrder:
        """
        Salience over the entities ``lf`` realizes.

        Higher GFs outrank lower ones; entities in the same GF bucket are
        incomparable. A Center realized below the subject is lifted to the
        subject's rank: incomparable with the subject, above everything else.
        """
        _require_resolved(lf)
        buckets = self.gf_buckets(lf)
        ranked = sorted(buckets.items(), key=lambda item: item[0].rank)
        pairs: Set[Pair] = set()
        for i, (_, upper) in enumerate(ranked):
            for _, lower in ranked[i + 1 :]:
                pairs.update((x, y) for x in upper for y in lower)

        realized = lf.realized()
        if center is not None and center.entity in realized:
            top = set(buckets.get(GrammaticalFunction.SUBJECT, ()))
            c = center.entity
            if c not in top:
                # Subject and Center stay incomparable.
                pairs = {(x, y) for x, y in pairs if c not in (x, y)}
                pairs.update((c, z) for z in realized if z != c and z not in top)
        return StrictPartialOrder.from_pairs(realized, pairs)

    def update_center(self, lf: LogicalForm, input_state: AttentionalState) -> Optional[CenterRecord]:
        """The highest-GF pronoun's referent becomes Center; no pronouns, no Center."""
        for _, mention in lf.ranked_args():
            if not mention.pronominal or mention.referent is None:
                continue
            previous = input_state.center
            subject = mention.gf == GrammaticalFunction.SUBJECT
            if previous is not None and previous.entity == mention.referent:
                length = previous.chain_length + 1 if subject else 1
                transition = CenterTransition.CHAIN
            else:
                length, transition = 1, CenterTransition.ESTABLISH
            return CenterRecord(
                entity=mention.referent,
                realized_gf=mention.gf,
                chain_length=length,
                transition=transition,
            )
        return None

    def advance(self, ctx: Context, resolved: Utterance) -> Context:
        lf = resolved.lf
        _require_resolved(lf)
        input_state = AttentionalState() if resolved.segment_initial else ctx.attention

        center = self.update_center(lf, input_state)
        local_order = self.project_salience(lf, center)
        local = lf.realized()

        if resolved.segment_initial:
            background: FrozenSet[str] = frozenset()
        else:
            background = (ctx.attention.background | ctx.attention.local_set) - set(local)
        salience = self._stack(local_order, ctx.attention.salience, background)

        model = ctx.model
        if not resolved.incomplete and lf.core_args():
            model = model.assert_fact(lf.proposition())

        if center is not None:
            logger.debug(
                f"{resolved.label}: Center {center.entity} "
                f"{center.transition.value} (chain {center.chain_length})"
            )
        return Context(
            lf_register=lf,
            attention=AttentionalState(
                local=local, salience=salience, center=center, background=background
            ),
            model=model,
        )

    def local_state(self, ctx: Context) -> Tuple[FrozenSet[str], StrictPartialOrder]:
        local = ctx.attention.local_set
        return local, ctx.attention.salience.restrict(local)

    def admit_background(self, ctx: Context, entity_ids: Iterable[str]) -> Context:
        """Add entities to the background, below every local entity."""
        state = ctx.attention
        new = set(entity_ids) - state.local_set - state.salience.carrier
        if not new:
            return ctx
        background = state.background | new
        carrier = state.salience.carrier | new
        pairs = set(state.salience.pairs) | {(x, y) for x in state.local for y in new}
        salience = StrictPartialOrder.from_pairs(carrier, pairs)
        attention = state.model_copy(update={"background": background, "salience": salience})
        return ctx.model_copy(update={"attention": attention})

    @staticmethod
    def _stack(
        local_order: StrictPartialOrder,
        previous: StrictPartialOrder,
        background: FrozenSet[str],
    ) -> StrictPartialOrder:
        """Local order on top; background below it, keeping its earlier order."""
        below = previous.restrict(background & previous.carrier)
        pairs = set(local_order.pairs) | set(below.pairs)
        pairs.update((x, y) for x in local_order.carrier for y in background)
        return StrictPartialOrder.from_pairs(local_order.carrier | background, pairs)


attention_engine = AttentionEngine()
