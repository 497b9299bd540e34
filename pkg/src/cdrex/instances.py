"""Candidate instance construction.

Chemical-disease mention pairs are pooled into two groups: intra-sentence
(both mentions in one sentence) and inter-sentence (sentence distance 1 or
2).  Inter-sentence pairs are only built for entity pairs with no intra
instance anywhere in the document, and only the closest mention pair is
kept, so the two groups never share an entity pair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .corpus import Document, Token

INTRA = "intra"
INTER = "inter"
POSITIVE = "positive"
NEGATIVE = "negative"

MAX_SENTENCE_DISTANCE = 2
WINDOW = 3  # words kept on each side of the entity pair


@dataclass(frozen=True)
class Instance:
    pmid: str
    chemical: str
    disease: str
    level: str  # INTRA or INTER
    chem_mention: int
    dis_mention: int
    sequence: tuple[Token, ...] = ()
    label: str = NEGATIVE


def _entity_positions(doc: Document) -> dict[int, tuple[int, int]]:
    """mention index -> (sentence index, token position)."""
    pos = {}
    for sent in doc.sentences:
        for tpos, tok in enumerate(sent.tokens):
            if tok.is_entity:
                pos[tok.mention_ref] = (sent.index, tpos)
    return pos


def _label(doc: Document, chem: str, dis: str) -> str:
    return POSITIVE if (chem, dis) in doc.gold_pairs else NEGATIVE


def build_intra(doc: Document) -> list[Instance]:
    """All chemical-disease mention co-occurrences within a sentence."""
    out = []
    for sent in doc.sentences:
        chems = [(p, t) for p, t in enumerate(sent.tokens) if t.is_entity
                 and doc.mentions[t.mention_ref].kind == "Chemical"]
        diseases = [(p, t) for p, t in enumerate(sent.tokens) if t.is_entity
                    and doc.mentions[t.mention_ref].kind == "Disease"]
        for _, ct in chems:
            for _, dt in diseases:
                if ct.text == dt.text:
                    continue  # identical MeSH id on both sides
                inst = Instance(pmid=doc.pmid, chemical=ct.text, disease=dt.text,
                                level=INTRA, chem_mention=ct.mention_ref,
                                dis_mention=dt.mention_ref,
                                label=_label(doc, ct.text, dt.text))
                out.append(replace(inst, sequence=tuple(make_sequence(inst, doc))))
    return out


def build_inter(doc: Document, intra: list[Instance]) -> list[Instance]:
    """One instance per entity pair seen only across sentences at distance 1-2.

    Among candidate mention pairs of an eligible entity pair, the pair with
    the smallest sentence distance wins; ties go to the earliest chemical
    mention, then the earliest disease mention.
    """
    intra_pairs = {(i.chemical, i.disease) for i in intra}
    positions = _entity_positions(doc)
    best: dict[tuple[str, str], tuple[int, int, int, int, int]] = {}
    for ci, cm in enumerate(doc.mentions):
        if cm.kind != "Chemical" or ci not in positions:
            continue
        for di, dm in enumerate(doc.mentions):
            if dm.kind != "Disease" or di not in positions:
                continue
            if cm.mesh_id == dm.mesh_id:
                continue
            pair = (cm.mesh_id, dm.mesh_id)
            if pair in intra_pairs:
                continue
            dist = abs(positions[ci][0] - positions[di][0])
            if not (1 <= dist <= MAX_SENTENCE_DISTANCE):
                continue
            key = (dist, cm.start, dm.start, ci, di)
            if pair not in best or key < best[pair]:
                best[pair] = key
    out = []
    for (chem, dis), (_, _, _, ci, di) in sorted(best.items(), key=lambda kv: kv[1][1:]):
        inst = Instance(pmid=doc.pmid, chemical=chem, disease=dis, level=INTER,
                        chem_mention=ci, dis_mention=di, label=_label(doc, chem, dis))
        out.append(replace(inst, sequence=tuple(make_sequence(inst, doc))))
    return out


def make_sequence(inst: Instance, doc: Document) -> list[Token]:
    """Input token window: entity pair plus up to WINDOW words on each side.

    Inter-sentence pairs first concatenate the two sentences holding the
    mentions (document order, intermediate sentences dropped), then apply
    the same windowing over the concatenation.
    """
    positions = _entity_positions(doc)
    c_sent, c_pos = positions[inst.chem_mention]
    d_sent, d_pos = positions[inst.dis_mention]
    if c_sent == d_sent:
        tokens = list(doc.sentences[c_sent].tokens)
        p1, p2 = c_pos, d_pos
    else:
        first, second = sorted((c_sent, d_sent))
        tokens = list(doc.sentences[first].tokens) + list(doc.sentences[second].tokens)
        offset = len(doc.sentences[first].tokens)
        p1 = c_pos + (offset if c_sent == second else 0)
        p2 = d_pos + (offset if d_sent == second else 0)
    lo, hi = min(p1, p2), max(p1, p2)
    lo = max(0, lo - WINDOW)
    hi = min(len(tokens) - 1, hi + WINDOW)
    return tokens[lo:hi + 1]


def build_instances(doc: Document) -> tuple[list[Instance], list[Instance]]:
    intra = build_intra(doc)
    return intra, build_inter(doc, intra)


def dump_instances(instances: Iterable[Instance], path) -> None:
    """TSV interchange: pmid, level, chemical, disease, label, token sequence."""
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            seq = " ".join(t.text for t in inst.sequence)
            fh.write(f"{inst.pmid}\t{inst.level}\t{inst.chemical}\t{inst.disease}\t{inst.label}\t{seq}\n")


def load_instances(path) -> list[Instance]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            pmid, level, chem, dis, label, seq = parts
            if level not in (INTRA, INTER) or label not in (POSITIVE, NEGATIVE):
                raise ValueError(f"{path}:{lineno}: bad level/label {level!r}/{label!r}")
            tokens = tuple(Token(text=t) for t in seq.split(" ") if t)
            out.append(Instance(pmid=pmid, chemical=chem, disease=dis, level=level,
                                chem_mention=-1, dis_mention=-1,
                                sequence=tokens, label=label))
    return out
