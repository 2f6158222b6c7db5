"""Bundled presentations and the WELC round-trip suite."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..welc import Status, WelcSystem, parse_welc
from ..words import SpecialPresentation, parse_presentation

# the six presentations used by the property suite
PROPERTY_CORPUS = (
    "abacab",
    "abacab_sq",
    "aab_abb_aab_sq",
    "ababb_abaabb_ababb",
    "abcdcdabab",
    "aba",
)


def path(name: str):
    return resources.files(__name__).joinpath(name if "." in name else f"{name}.orm")


def read(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def presentation(name: str) -> SpecialPresentation:
    return parse_presentation(read(name))


@dataclass(frozen=True)
class SuiteInstance:
    name: str
    expect: Status
    kind: str           # "sat", "length" or "equation"
    text: str
    system: WelcSystem


def welc_suite() -> list:
    out = []
    for block in read("welc_suite.txt").split("\n\n"):
        meta, body = {}, []
        for line in block.splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            head, _, rest = line.partition(":")
            if head in ("name", "expect", "kind"):
                meta[head] = rest.strip()
            else:
                body.append(line)
        if not body:
            continue
        text = "\n".join(body)
        expect = Status(meta["expect"])
        kind = meta.get("kind", "sat" if expect is Status.SAT else "equation")
        out.append(SuiteInstance(meta["name"], expect, kind, text, parse_welc(text)))
    return out
