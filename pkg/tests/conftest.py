"""Shared corpus fixtures.

The corpus: the A3 quiver with one zero relation, the loop algebra, the
cyclic Nakayama algebra on two vertices, linear A2/A3 without relations,
and the one-vertex algebra.  Graphs are enumerated once per session.
"""

from __future__ import annotations

import pytest

from tautilt import enumerate_exchange_graph, parse_algebra

A3_REL_TEXT = """\
vertices 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relation a*b
"""

LOOP_TEXT = """\
vertices 2
arrow a: 1 -> 2
arrow b: 2 -> 2
relation a*b
relation b*b
"""

NAKAYAMA2_TEXT = """\
vertices 2
arrow a: 1 -> 2
arrow b: 2 -> 1
relation a*b
relation b*a
"""

A2_TEXT = """\
vertices 2
arrow a: 1 -> 2
"""

A3_TEXT = """\
vertices 3
arrow a: 1 -> 2
arrow b: 2 -> 3
"""

POINT_TEXT = """\
vertices 1
"""

CORPUS_TEXTS = {
    "a3_rel": A3_REL_TEXT,
    "loop": LOOP_TEXT,
    "nakayama2": NAKAYAMA2_TEXT,
    "a2": A2_TEXT,
    "a3": A3_TEXT,
    "point": POINT_TEXT,
}


@pytest.fixture(scope="session")
def a3_rel():
    return parse_algebra(A3_REL_TEXT)


@pytest.fixture(scope="session")
def loop_algebra():
    return parse_algebra(LOOP_TEXT)


@pytest.fixture(scope="session")
def nakayama2():
    return parse_algebra(NAKAYAMA2_TEXT)


@pytest.fixture(scope="session")
def a2():
    return parse_algebra(A2_TEXT)


@pytest.fixture(scope="session")
def a3_plain():
    return parse_algebra(A3_TEXT)


@pytest.fixture(scope="session")
def point_algebra():
    return parse_algebra(POINT_TEXT)


@pytest.fixture(scope="session")
def corpus(a3_rel, loop_algebra, nakayama2, a2, a3_plain, point_algebra):
    return {
        "a3_rel": a3_rel,
        "loop": loop_algebra,
        "nakayama2": nakayama2,
        "a2": a2,
        "a3": a3_plain,
        "point": point_algebra,
    }


@pytest.fixture(scope="session")
def a3_rel_graph(a3_rel):
    return enumerate_exchange_graph(a3_rel)


@pytest.fixture(scope="session")
def corpus_graphs(corpus):
    return {name: enumerate_exchange_graph(q) for name, q in corpus.items()}
