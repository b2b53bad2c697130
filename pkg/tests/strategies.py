"""Hypothesis strategies built on the seeded generators."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from awfslab.cli import (
    free_reflection,
    gen_category,
    gen_fibration,
    gen_groupoid,
    gen_problem,
)
from awfslab.structured import CARTESIAN, COCARTESIAN

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _rng(seed: int) -> random.Random:
    return random.Random(seed)


categories = seeds.map(lambda s: gen_category(_rng(s), 3))
groupoids = seeds.map(lambda s: gen_groupoid(_rng(s), 3))
orientations = st.sampled_from((CARTESIAN, COCARTESIAN))


@st.composite
def fibrations(draw, groupoid_base: bool = False, max_fiber: int = 2):
    rng = _rng(draw(seeds))
    B = gen_groupoid(rng, 2) if groupoid_base else gen_category(rng, 2)
    return gen_fibration(rng, B, draw(orientations), max_fiber=max_fiber)


@st.composite
def reflections(draw):
    rng = _rng(draw(seeds))
    D = gen_category(rng, 2)
    targets = {k: rng.choice(D.objects) for k in range(rng.randint(1, 2))}
    return free_reflection(D, targets, draw(st.booleans()))


@st.composite
def lifting_problems(draw):
    """(reflection, cartesian fibration, problem) or a discarded draw."""
    rng = _rng(draw(seeds))
    D = gen_category(rng, 2)
    sr = free_reflection(D, {k: rng.choice(D.objects) for k in range(rng.randint(1, 2))})
    sf = gen_fibration(rng, gen_category(rng, 2), CARTESIAN, max_fiber=2)
    problem = gen_problem(rng, sr, sf)
    return sr, sf, problem
