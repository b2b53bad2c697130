"""Write the JSON fixtures under fixtures/.

Every file is produced from a fixed seed, so rerunning this script leaves
the directory byte-identical.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from awfslab.cli import (
    Fixture,
    Judgment,
    SquareFixture,
    bz2_type,
    generate,
    pi_point_count_fixture,
    serialize,
    twisted_bz2_type,
)
from awfslab.core_cat import bz2, identity_functor, point, terminal
from awfslab.structured import COCARTESIAN, as_orientation, pullback_square


def fixtures() -> dict:
    out = {
        "terminal.json": Fixture("category", terminal()),
        "bz2.json": Fixture("category", bz2()),
        "bz2_over_point.json": Fixture("fibration", bz2_type().fibration),
        "twisted_bz2.json": Fixture("fibration", twisted_bz2_type().fibration),
    }
    sq = generate("square", 3, seed=0).payload
    out["lift_square.json"] = Fixture("square", sq)
    out["lift_refl.json"] = Fixture("reflection", sq.left)
    out["lift_fib.json"] = Fixture("fibration", sq.right)

    P = as_orientation(twisted_bz2_type().fibration, COCARTESIAN)
    Q, square = pullback_square(P, point(P.base, "*"))
    out["bc_square.json"] = Fixture("square", SquareFixture(square, Q, P))

    T, S = pi_point_count_fixture()
    out["pi_judgment.json"] = Fixture("judgment", Judgment("pi", T.fibration, S.fibration))
    out["id_judgment.json"] = Fixture("judgment", Judgment("id", twisted_bz2_type().fibration))
    out["sigma_judgment.json"] = Fixture(
        "judgment", Judgment("sigma", bz2_type().fibration, twisted_bz2_type().fibration)
    )
    out["identity_functor.json"] = Fixture("functor", identity_functor(bz2()))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "fixtures")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, fx in sorted(fixtures().items()):
        (args.out / name).write_bytes(serialize(fx))
        print(name)


if __name__ == "__main__":
    main()
