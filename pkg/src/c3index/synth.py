"""Seeded synthetic corpora with preferential-attachment citations.

Papers arrive one at a time. Paper ``i`` gets year
``year_start + floor(i * n_years / n_papers)``, a team of
``1 + Poisson(authors_per_paper_mean - 1)`` distinct authors and
``Poisson(refs_per_paper_mean)`` distinct references to earlier papers.

A reference target ``k`` is drawn with probability proportional to
``1 + attachment_bias * citations(k)``, sampled exactly as a two-part
mixture: uniform over earlier papers with weight ``n``, or uniform over all
previous citation events (so proportional to citation count) with weight
``attachment_bias * total_citations``. Team members are drawn the same way
with ``1 + papers(a)`` weights over the author pool.

Randomness comes from numpy's PCG64 bit generator seeded with ``seed``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, PaperRecord

__all__ = ["SynthParams", "generate"]


@dataclass(frozen=True)
class SynthParams:
    n_papers: int
    n_authors: int
    year_start: int = 1990
    year_end: int = 2008
    refs_per_paper_mean: float = 5.0
    authors_per_paper_mean: float = 2.5
    attachment_bias: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_papers < 1 or self.n_authors < 1:
            raise ValueError("n_papers and n_authors must be positive")
        if self.year_start > self.year_end or self.year_start <= 0:
            raise ValueError("need 0 < year_start <= year_end")
        if self.refs_per_paper_mean < 0:
            raise ValueError("refs_per_paper_mean must be >= 0")
        if self.authors_per_paper_mean < 1:
            raise ValueError("authors_per_paper_mean must be >= 1")
        if self.attachment_bias < 0:
            raise ValueError("attachment_bias must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class _Urn:
    """Sampler for ``P(i) ∝ 1 + bias * hits(i)`` over items ``0..n-1``."""

    def __init__(self, bias: float):
        self.bias = bias
        self.events: list[int] = []

    def draw(self, rng: np.random.Generator, n: int, k: int) -> list[int]:
        """``k`` distinct items out of the first ``n`` (``k <= n``)."""
        if k >= n:
            return list(range(n))
        chosen: dict[int, None] = {}
        events = self.events
        pref = self.bias * len(events)
        p_uniform = n / (n + pref)
        tries = 0
        while len(chosen) < k and tries < 20 * k:
            tries += 1
            if rng.random() < p_uniform:
                item = int(rng.integers(n))
            else:
                item = events[int(rng.integers(len(events)))]
            chosen.setdefault(item, None)
        if len(chosen) < k:
            rest = [i for i in rng.permutation(n).tolist() if i not in chosen]
            for item in rest[: k - len(chosen)]:
                chosen[item] = None
        return list(chosen)

    def hit(self, items) -> None:
        self.events.extend(items)


def generate(params: SynthParams) -> Corpus:
    """Build a valid, closed corpus; identical params give identical output."""
    rng = np.random.Generator(np.random.PCG64(params.seed))
    n, m = params.n_papers, params.n_authors
    n_years = params.year_end - params.year_start + 1
    pw = len(str(n - 1))
    aw = len(str(m - 1))
    pid = [f"p{i:0{pw}d}" for i in range(n)]
    names = [f"a{j:0{aw}d}" for j in range(m)]

    cite_urn = _Urn(params.attachment_bias)
    team_urn = _Urn(1.0)
    extra_authors = rng.poisson(params.authors_per_paper_mean - 1.0, size=n)
    n_refs = rng.poisson(params.refs_per_paper_mean, size=n)

    records = []
    for i in range(n):
        year = params.year_start + (i * n_years) // n
        team = team_urn.draw(rng, m, min(m, 1 + int(extra_authors[i])))
        team_urn.hit(team)
        refs = cite_urn.draw(rng, i, min(i, int(n_refs[i]))) if i else []
        cite_urn.hit(refs)
        records.append(
            PaperRecord(
                id=pid[i],
                title=f"synthetic paper {i}",
                year=year,
                author_names=tuple(names[a] for a in team),
                ref_ids=tuple(pid[r] for r in refs),
            )
        )
    return Corpus.from_records(records)
