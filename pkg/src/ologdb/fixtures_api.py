"""Loaders for the bundled fixture files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path as FsPath
from typing import List, Tuple

from .dsl import parse_schema
from .instance import Instance, instance_from_json
from .migration import Translation, translation_from_json
from .schema import Schema
from .specfiber import Specification, parse_asserted, parse_specification


def fixture_text(name: str) -> str:
    return resources.files("ologdb.fixtures").joinpath(name).read_text("utf-8")


def fixture_path(name: str) -> FsPath:
    """Filesystem path of a bundled fixture (the package is installed flat)."""
    path = resources.files("ologdb.fixtures").joinpath(name)
    return FsPath(str(path))


def load_schema(name: str) -> Schema:
    return parse_schema(fixture_text(f"{name}.olog"), name)


def schema_a() -> Schema:
    return load_schema("A")


def schema_b() -> Schema:
    return load_schema("B")


def schema_c() -> Schema:
    return load_schema("C")


def schema_s() -> Schema:
    return load_schema("S")


def schema_a_core() -> Schema:
    return load_schema("Acore")


def db_a() -> Instance:
    return instance_from_json(fixture_text("DA.json"), schema_a())


def db_a_with_1970() -> Instance:
    return instance_from_json(fixture_text("DA_1970.json"), schema_a())


def db_s() -> Instance:
    return instance_from_json(fixture_text("DS.json"), schema_s())


def phi() -> Translation:
    return translation_from_json(fixture_text("phi.json"), schema_a(), schema_b())


def psi() -> Translation:
    return translation_from_json(fixture_text("psi.json"), schema_a(), schema_c())


def phi_core() -> Translation:
    return translation_from_json(
        fixture_text("phi_core.json"), schema_a_core(), schema_b()
    )


def psi_core() -> Translation:
    return translation_from_json(
        fixture_text("psi_core.json"), schema_a_core(), schema_c()
    )


def silent_piece_spec() -> Specification:
    return parse_specification(fixture_text("E.spec"), schema_s())


def asserted_order() -> List[Tuple[str, str]]:
    return parse_asserted(fixture_text("lattice.asserted"))
