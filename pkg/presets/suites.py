"""
Suite Catalog - Verification suites with claim tags and config schemas.

Each suite includes config_examples that are validated against its
config_schema when the catalog is registered.
"""

from src.models import MODEL_SCHEMA
from src.suite_registry import create_suite_definition

from .models import M1, M1_FINITE, M2, M3

_MODEL_PROPERTIES = {"model": {**MODEL_SCHEMA, "description": "Model config document"}}

_WALK_PROPERTIES = {
    "steps": {
        "type": "string",
        "description": "Step law as comma-separated value:probability pairs (e.g. -1:1/2,1:1/2)",
    },
    "n": {"type": "integer", "minimum": 0, "description": "Walk length"},
}

SUITES = [
    create_suite_definition(
        name="prop1",
        description=(
            "Six last-passage times of a compound Poisson process without up jumps share one "
            "law: pairwise KS on {sigma>0}, atom masses at 0, and the three complementary "
            "pairs (sums, symmetry, min-components)."
        ),
        claims=["six-way-law", "pair-exchangeability", "atom-at-zero"],
        properties=_MODEL_PROPERTIES,
        required=["model"],
        examples=[{"model": M1}, {"model": M3}],
    ),
    create_suite_definition(
        name="prop2",
        description=(
            "On {X_T > 0} over a finite horizon the six times share one law and the pre-sigma "
            "level is 0, so the tilde occupation times equal the plain ones path by path."
        ),
        claims=["finite-horizon-law"],
        properties=_MODEL_PROPERTIES,
        required=["model"],
        examples=[{"model": M1_FINITE}],
    ),
    create_suite_definition(
        name="general",
        description=(
            "Two-sided jumps on {X_T > 0}: within-class KS for {N-, Ñ+, F->, G<-} and "
            "{N+, Ñ-, F<-, G->}; cross-class statistics reported for reference or asserted "
            "as a positive control."
        ),
        claims=["two-class-partition", "cross-class-gap"],
        properties=_MODEL_PROPERTIES,
        required=["model"],
        examples=[{"model": M2}],
    ),
    create_suite_definition(
        name="transforms",
        description=(
            "Empirical Laplace transforms of F->, F<-, I, sigma and the joint (F->, F<-) "
            "against their closed forms on an s-grid; KS of F<- and N- against independent "
            "passage times at an independent depth."
        ),
        claims=[
            "transform-F",
            "pollaczek-khinchine",
            "sigma-transform",
            "joint-transform",
            "infimum-passage",
            "passage-at-depth",
        ],
        properties={
            **_MODEL_PROPERTIES,
            "s_grid": {
                "type": "array",
                "items": {"type": "number", "exclusiveMinimum": 0},
                "minItems": 1,
                "description": "Transform arguments (default 0.25, 0.5, 1, 2)",
            },
        },
        required=["model"],
        examples=[{"model": M1}, {"model": M1, "s_grid": [0.25, 0.5, 1.0, 2.0]}],
    ),
    create_suite_definition(
        name="uniform",
        description=(
            "Given sigma, each of the six times divided by sigma is uniform on [0, 1]; "
            "one-sample KS on {sigma>0}."
        ),
        claims=["uniform-law"],
        properties=_MODEL_PROPERTIES,
        required=["model"],
        examples=[{"model": M1}],
    ),
    create_suite_definition(
        name="walk-prop3",
        description=(
            "Exact rational certification of the two-class partition and of the reversed "
            "path law for a lattice walk on {S_n in B}."
        ),
        claims=["two-class-partition", "reversal-law"],
        properties={
            **_WALK_PROPERTIES,
            "event": {
                "type": "string",
                "description": "Conditioning event: all, nonneg or an interval [a,b]",
            },
        },
        required=["steps", "n"],
        examples=[
            {"steps": "-1:1/2,1:1/2", "n": 2, "event": "all"},
            {"steps": "-1:1/3,2:2/3", "n": 6, "event": "nonneg"},
            {"steps": "-1:1/2,1:1/2", "n": 0},
        ],
    ),
    create_suite_definition(
        name="walk-corollary",
        description=(
            "Exact certification that on {S_sigma = 0} the six times share one law and the "
            "tilde occupation counts match path by path."
        ),
        claims=["last-visit-zero"],
        properties=_WALK_PROPERTIES,
        required=["steps", "n"],
        examples=[{"steps": "-1:1/2,1:1/2", "n": 4}],
    ),
]
