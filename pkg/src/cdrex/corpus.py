"""PubTator corpus model: documents, mentions, sentences, tokens.

File format (one block per document, blank line between blocks)::

    PMID|t|TITLE
    PMID|a|ABSTRACT
    PMID<TAB>START<TAB>END<TAB>TEXT<TAB>TYPE<TAB>MESHID
    PMID<TAB>CID<TAB>CHEM_MESH<TAB>DIS_MESH

Character offsets index into ``title + " " + abstract``.  Annotations with
MeSH id ``-1`` (unnormalized) are dropped; composite ids like
``D009202|D009203`` expand into one mention per id over the same span.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Optional

CHEMICAL = "Chemical"
DISEASE = "Disease"

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


class CorpusError(Exception):
    """Malformed PubTator input."""


@dataclass(frozen=True)
class Mention:
    start: int
    end: int
    surface: str
    kind: str  # CHEMICAL or DISEASE
    mesh_id: str


@dataclass(frozen=True)
class Token:
    text: str
    is_entity: bool = False
    mention_ref: Optional[int] = None


@dataclass(frozen=True)
class Sentence:
    index: int
    start: int
    end: int
    text: str
    tokens: tuple[Token, ...] = ()


@dataclass(frozen=True)
class Document:
    pmid: str
    title: str
    abstract: str
    mentions: tuple[Mention, ...]
    gold_pairs: frozenset[tuple[str, str]]
    sentences: tuple[Sentence, ...] = ()

    @property
    def text(self) -> str:
        return self.title + " " + self.abstract

    def title_mentions(self) -> list[Mention]:
        return [m for m in self.mentions if m.start < len(self.title)]

    def abstract_mentions(self) -> list[Mention]:
        return [m for m in self.mentions if m.start >= len(self.title)]


def _split_mesh_ids(raw: str) -> list[str]:
    return [part for part in raw.split("|") if part and part != "-1"]


def parse_pubtator(stream: Iterable[str]) -> list[Document]:
    """Parse a PubTator text stream into Documents (sentences not yet split)."""
    docs = []
    block: list[tuple[int, str]] = []
    lineno = 0
    for raw in stream:
        lineno += 1
        line = raw.rstrip("\n").rstrip("\r")
        if line.strip() == "":
            if block:
                docs.append(_parse_block(block))
                block = []
        else:
            block.append((lineno, line))
    if block:
        docs.append(_parse_block(block))
    return docs


def parse_pubtator_file(path) -> list[Document]:
    with open(path, encoding="utf-8") as fh:
        return parse_pubtator(fh)


def _parse_block(block: list[tuple[int, str]]) -> Document:
    lineno, first = block[0]
    pmid, sep, _ = first.partition("|t|")
    if not sep or "\t" in pmid:
        raise CorpusError(f"line {lineno}: expected 'PMID|t|...' title line, got: {first[:60]!r}")
    title = first[len(pmid) + 3:]
    if len(block) < 2:
        raise CorpusError(f"line {lineno}: document {pmid} has no abstract line")
    lineno_a, second = block[1]
    prefix = f"{pmid}|a|"
    if not second.startswith(prefix):
        raise CorpusError(f"line {lineno_a}: document {pmid} has no '{pmid}|a|' abstract line")
    abstract = second[len(prefix):]
    text = title + " " + abstract

    mentions: list[Mention] = []
    gold: set[tuple[str, str]] = set()
    for ln, line in block[2:]:
        parts = line.split("\t")
        if parts[0] != pmid:
            raise CorpusError(f"line {ln}: pmid {parts[0]} inside block for {pmid}")
        if len(parts) == 4 and parts[1] == "CID":
            gold.add((parts[2], parts[3]))
            continue
        if len(parts) != 6:
            raise CorpusError(f"line {ln}: document {pmid}: expected 6 annotation fields, got {len(parts)}")
        _, s_raw, e_raw, surface, kind, mesh_raw = parts
        try:
            start, end = int(s_raw), int(e_raw)
        except ValueError:
            raise CorpusError(f"line {ln}: document {pmid}: non-integer offsets {s_raw!r}/{e_raw!r}") from None
        if not (0 <= start < end <= len(text)):
            raise CorpusError(
                f"line {ln}: document {pmid}: offsets [{start}, {end}) outside text of length {len(text)}"
            )
        if kind not in (CHEMICAL, DISEASE):
            raise CorpusError(f"line {ln}: document {pmid}: unknown mention type {kind!r}")
        for mesh_id in _split_mesh_ids(mesh_raw):
            mentions.append(Mention(start, end, surface, kind, mesh_id))

    mentions.sort(key=lambda m: (m.start, m.end, m.kind, m.mesh_id))
    return Document(pmid=pmid, title=title, abstract=abstract,
                    mentions=tuple(mentions), gold_pairs=frozenset(gold))


def to_pubtator(doc: Document) -> str:
    """Serialize a Document back to PubTator text (one block, no trailing blank line)."""
    lines = [f"{doc.pmid}|t|{doc.title}", f"{doc.pmid}|a|{doc.abstract}"]
    for m in doc.mentions:
        lines.append(f"{doc.pmid}\t{m.start}\t{m.end}\t{m.surface}\t{m.kind}\t{m.mesh_id}")
    for chem, dis in sorted(doc.gold_pairs):
        lines.append(f"{doc.pmid}\tCID\t{chem}\t{dis}")
    return "\n".join(lines) + "\n"


def write_pubtator(docs: Iterable[Document], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(to_pubtator(d) for d in docs))


_BOUNDARY_CHARS = ".?!"


def _sentence_spans(text: str, title_len: int, mentions: tuple[Mention, ...]) -> list[tuple[int, int]]:
    """Title is sentence 0; the abstract splits after ./?/! followed by
    whitespace and an uppercase letter or digit. A boundary is suppressed when
    it would fall strictly inside a mention span."""
    spans = [(0, title_len)]
    n = len(text)
    pos = title_len
    while pos < n and text[pos].isspace():
        pos += 1
    start = pos
    i = start
    while i < n - 1:
        if text[i] in _BOUNDARY_CHARS and text[i + 1].isspace():
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j < n and (text[j].isupper() or text[j].isdigit()):
                cut = i + 1
                if not any(m.start < cut < m.end for m in mentions):
                    spans.append((start, cut))
                    start = j
                    i = j
                    continue
        i += 1
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return spans


def split_sentences(doc: Document) -> Document:
    """Return a copy of the document with sentences split and tokenized."""
    text = doc.text
    spans = _sentence_spans(text, len(doc.title), doc.mentions)
    sentences = []
    for idx, (start, end) in enumerate(spans):
        sent = Sentence(index=idx, start=start, end=end, text=text[start:end])
        sentences.append(replace(sent, tokens=tuple(tokenize(sent, list(doc.mentions)))))
    return replace(doc, sentences=tuple(sentences))


def tokenize(sentence: Sentence, mentions: list[Mention]) -> list[Token]:
    """Tokenize one sentence.

    Mention spans become MeSH-id pseudo-word tokens (one per mention when a
    composite id shares the span).  A mention immediately enclosed by
    parentheses is dropped together with them.  Remaining text is lowercased
    and split into alphanumeric runs; punctuation never yields tokens.
    """
    in_sentence = [(i, m) for i, m in enumerate(mentions)
                   if sentence.start <= m.start < sentence.end]
    # group identical spans (composite ids); reject genuine overlaps
    groups: list[tuple[int, int, list[tuple[int, Mention]]]] = []
    for i, m in in_sentence:
        end = min(m.end, sentence.end)
        if groups and groups[-1][0] == m.start and groups[-1][1] == end:
            groups[-1][2].append((i, m))
        elif groups and m.start < groups[-1][1]:
            prev = groups[-1]
            raise CorpusError(
                f"overlapping mention spans [{prev[0]}, {prev[1]}) and [{m.start}, {end}) "
                f"({prev[2][0][1].mesh_id} vs {m.mesh_id})"
            )
        else:
            groups.append((m.start, end, [(i, m)]))

    tokens: list[Token] = []
    cursor = sentence.start

    def words(upto: int) -> None:
        segment = sentence.text[cursor - sentence.start: upto - sentence.start]
        for w in _WORD_RE.findall(segment.lower()):
            tokens.append(Token(text=w))

    for start, end, members in groups:
        rel_s, rel_e = start - sentence.start, end - sentence.start
        in_parens = (rel_s > 0 and sentence.text[rel_s - 1] == "("
                     and rel_e < len(sentence.text) and sentence.text[rel_e] == ")")
        if in_parens:
            words(start - 1)
            cursor = end + 1
            continue
        words(start)
        for idx, m in members:
            tokens.append(Token(text=m.mesh_id, is_entity=True, mention_ref=idx))
        cursor = end
    words(sentence.end)
    return tokens
