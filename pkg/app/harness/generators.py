"""Seeded random orders, class conclusions and discourses."""

import random
from typing import List, Optional, Sequence, Tuple

from app.core.order import OVERRIDE_ORDER, PreferenceClass, StrictPartialOrder
from app.models.entity import Entity, Gender, Sort
from app.models.mention import Agreement, GrammaticalFunction, Mention, MentionKind
from app.models.resolution import ClassConclusion, Strength
from app.models.utterance import LogicalForm, Polarity, Utterance
from app.schemas.document import DiscourseDocument

PREDICATES = ("see", "call", "help", "meet", "praise", "blame")
PRONOUNS = {Gender.MASC: "he", Gender.FEM: "she"}
OBJECT_PRONOUNS = {Gender.MASC: "him", Gender.FEM: "her"}


def random_order(
    rng: random.Random,
    carrier: Sequence[str],
    density: float = 0.5,
    tag: Optional[PreferenceClass] = None,
) -> StrictPartialOrder:
    """A random strict partial order: pairs drawn along a shuffled ranking."""
    ranking = list(carrier)
    rng.shuffle(ranking)
    pairs = [
        (ranking[i], ranking[j])
        for i in range(len(ranking))
        for j in range(i + 1, len(ranking))
        if rng.random() < density
    ]
    support = {pair: {tag} for pair in pairs} if tag else None
    return StrictPartialOrder.from_pairs(carrier, pairs, support)


def random_conclusions(rng: random.Random, candidates: Sequence[str]) -> List[ClassConclusion]:
    """Zero to two conclusions per class; different conclusions may contradict."""
    conclusions = []
    for cls in OVERRIDE_ORDER:
        for _ in range(rng.randint(0, 2)):
            strength = Strength.NORMAL
            if cls == PreferenceClass.ATT and rng.random() < 0.3:
                strength = Strength.EXTREME
            conclusions.append(
                ClassConclusion(
                    preference_class=cls,
                    order=random_order(rng, candidates, rng.choice((0.3, 0.5, 0.8)), cls),
                    strength=strength,
                )
            )
    return conclusions


def random_entities(rng: random.Random, count: int) -> List[Entity]:
    return [
        Entity(id=f"P{i}", sort=Sort.PERSON, gender=rng.choice((Gender.MASC, Gender.FEM)))
        for i in range(1, count + 1)
    ]


def _named(entity: Entity, gf: GrammaticalFunction) -> Mention:
    return Mention(
        surface=entity.id,
        kind=MentionKind.DEFINITE,
        gf=gf,
        agreement=Agreement(gender=entity.gender, number=entity.number, person=entity.person),
        referent=entity.id,
    )


def _pronoun(entity: Entity, gf: GrammaticalFunction, stressed: bool) -> Mention:
    table = PRONOUNS if gf == GrammaticalFunction.SUBJECT else OBJECT_PRONOUNS
    surface = table[entity.gender]
    return Mention(
        surface=surface.upper() if stressed else surface,
        kind=MentionKind.PRONOUN,
        stressed=stressed,
        gf=gf,
        agreement=Agreement(gender=entity.gender, number=entity.number),
    )


def generate_discourse(
    rng: random.Random,
    entity_count: Tuple[int, int] = (2, 4),
    utterance_count: Tuple[int, int] = (2, 5),
    stress_rate: float = 0.3,
    title: str = "generated",
) -> DiscourseDocument:
    """
    A random well-formed discourse over PERSON entities.

    The first utterance names two entities; later ones mix names and
    pronouns, and every utterance with a pronoun gets a variant with the
    stress of its pronouns flipped.
    """
    entities = random_entities(rng, rng.randint(*entity_count))
    utterances: List[Utterance] = []
    variants: List[Utterance] = []
    rule_lines: List[str] = []

    for n in range(1, rng.randint(*utterance_count) + 1):
        subject, obj = rng.sample(entities, 2)
        args = []
        for role, gf, entity in (
            ("Subj", GrammaticalFunction.SUBJECT, subject),
            ("Obj", GrammaticalFunction.OBJECT, obj),
        ):
            if n > 1 and rng.random() < 0.6:
                mention = _pronoun(entity, gf, rng.random() < stress_rate)
            else:
                mention = _named(entity, gf)
            args.append((role, mention))
        if n > 1 and all(not m.pronominal for _, m in args):
            args[0] = ("Subj", _pronoun(subject, GrammaticalFunction.SUBJECT, rng.random() < stress_rate))

        lf = LogicalForm(
            predicate=rng.choice(PREDICATES),
            args=tuple(args),
            polarity=Polarity.NEG if rng.random() < 0.1 else Polarity.POS,
        )
        utterance = Utterance(
            index=n,
            label=f"U{n}",
            lf=lf,
            segment_initial=n > 1 and rng.random() < 0.1,
        )
        utterances.append(utterance)

        if lf.pronouns():
            flipped = tuple((role, m.counterpart() if m.pronominal else m) for role, m in lf.args)
            variants.append(
                utterance.model_copy(
                    update={
                        "label": f"U{n}v",
                        "lf": lf.model_copy(update={"args": flipped}),
                        "variant_of": utterance.label,
                    }
                )
            )

    if rng.random() < 0.5:
        antecedent, consequent = rng.sample(PREDICATES, 2)
        rule_lines.append(f"rule R1: {antecedent}(X,Y) ~> {consequent}(Y,X).")

    return DiscourseDocument(
        title=title,
        entities=entities,
        utterances=utterances,
        variants=variants,
        rule_text="\n".join(rule_lines),
    )
