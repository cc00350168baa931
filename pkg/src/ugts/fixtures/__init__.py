"""Bundled specification files."""

from importlib import resources


def fixture_path(name: str = "dining.ugts"):
    return resources.files(__name__).joinpath(name)


def fixture_text(name: str = "dining.ugts") -> str:
    return fixture_path(name).read_text(encoding="utf-8")
