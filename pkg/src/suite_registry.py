"""
Suite Registry - Verification suite definitions and their config schemas.

A suite definition is a plain dict (see `create_suite_definition`) naming the
claims its checks carry and the JSON schema its config must satisfy. The
definition itself is checked against SUITE_DEFINITION_SCHEMA; its
config_examples are checked against its own config_schema.
"""

import logging

from jsonschema import ValidationError, validate

from .errors import ConfigError

logger = logging.getLogger(__name__)

# Claim tags a suite definition may carry
CLAIM_TAGS = (
    "six-way-law",
    "pair-exchangeability",
    "atom-at-zero",
    "finite-horizon-law",
    "two-class-partition",
    "cross-class-gap",
    "transform-F",
    "pollaczek-khinchine",
    "sigma-transform",
    "joint-transform",
    "infimum-passage",
    "passage-at-depth",
    "uniform-law",
    "reversal-law",
    "last-visit-zero",
)

SUITE_DEFINITION_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "claims": {
            "type": "array",
            "items": {"enum": list(CLAIM_TAGS)},
            "minItems": 1,
            "uniqueItems": True,
        },
        "config_schema": {"type": "object"},
        "config_examples": {"type": "array", "items": {"type": "object"}},
    },
    "required": ["name", "description", "claims", "config_schema"],
}


class SuiteRegistry:
    """
    Suite definitions keyed by name.

    Malformed definitions are refused with ConfigError. Config examples that
    do not match their own schema are kept on record (see
    `get_validation_errors`) so a caller can decide whether that is fatal.
    """

    def __init__(self):
        self.suites: dict[str, dict] = {}
        self._example_errors: list[str] = []

    def register(self, suite_def: dict) -> None:
        """
        Add one suite definition.

        Raises:
            ConfigError: If the definition is malformed or the name is taken
        """
        try:
            validate(instance=suite_def, schema=SUITE_DEFINITION_SCHEMA)
        except ValidationError as e:
            raise ConfigError(f"Malformed suite definition: {e.message}") from e
        name = suite_def["name"]
        if name in self.suites:
            raise ConfigError(f"Suite '{name}' is already registered")

        self.suites[name] = suite_def
        bad = self._check_examples(suite_def)
        logger.debug(
            f"Registered suite {name}: {len(suite_def.get('config_examples', []))} examples, "
            f"{bad} invalid"
        )

    def _check_examples(self, suite_def: dict) -> int:
        bad = 0
        for i, example in enumerate(suite_def.get("config_examples", [])):
            try:
                validate(instance=example, schema=suite_def["config_schema"])
            except ValidationError as e:
                message = f"Suite '{suite_def['name']}' example {i} invalid: {e.message}"
                self._example_errors.append(message)
                logger.warning(message)
                bad += 1
        return bad

    def register_many(self, suites: list[dict]) -> int:
        """Register every well-formed definition; returns how many were accepted."""
        accepted = 0
        for suite_def in suites:
            try:
                self.register(suite_def)
            except ConfigError as e:
                logger.error(f"Skipping suite definition: {e}")
                continue
            accepted += 1
        return accepted

    def get_suite(self, name: str) -> dict:
        """
        Raises:
            ConfigError: If no suite has this name
        """
        if name not in self.suites:
            raise ConfigError(f"Unknown suite '{name}', expected one of {sorted(self.suites)}")
        return self.suites[name]

    def list_suites(self, names: list[str] | None = None) -> list[dict]:
        """Name, description and claims of the given suites (all of them by default)."""
        selected = self.suites if names is None else [self.get_suite(n)["name"] for n in names]
        return [
            {
                "name": name,
                "description": self.suites[name]["description"],
                "claims": list(self.suites[name]["claims"]),
            }
            for name in selected
        ]

    def search_suites(self, query: str) -> list[str]:
        """
        Suites whose claim tags, name or description contain the query.

        Args:
            query: Claim tag or substring, case-insensitive

        Returns:
            Matching suite names in registration order
        """
        needle = query.lower()
        return [
            name
            for name, suite in self.suites.items()
            if needle in " ".join([name, suite["description"], *suite["claims"]]).lower()
        ]

    def validate_config(self, name: str, config: dict) -> dict:
        """
        Check a config against a suite's schema.

        Returns:
            The config, unchanged

        Raises:
            ConfigError: If the suite is unknown or the config does not match
        """
        schema = self.get_suite(name)["config_schema"]
        try:
            validate(instance=config, schema=schema)
        except ValidationError as e:
            raise ConfigError(f"Invalid config for suite '{name}': {e.message}") from e
        return config

    def get_validation_errors(self) -> list[str]:
        """Messages for config examples that failed their suite's schema."""
        return list(self._example_errors)

    def __len__(self) -> int:
        return len(self.suites)


def create_suite_definition(
    name: str,
    description: str,
    claims: list[str],
    properties: dict[str, dict],
    required: list[str] | None = None,
    examples: list[dict] | None = None,
) -> dict:
    """
    Build a suite definition whose config is an object with exactly `properties`.

    Args:
        name: Suite name as used by `verify --suite`
        description: What the suite certifies
        claims: Claim tags carried by the suite's checks (see CLAIM_TAGS)
        properties: JSON schema of each config key
        required: Config keys that must be present
        examples: Example configs, checked at registration

    Returns:
        Suite definition dict
    """
    definition = {
        "name": name,
        "description": description,
        "claims": list(claims),
        "config_schema": {
            "type": "object",
            "properties": properties,
            "required": list(required or ()),
            "additionalProperties": False,
        },
    }
    if examples:
        definition["config_examples"] = list(examples)
    return definition
