"""Opetopes, the category of opetopes, and opetopic sets."""

from opetopic.opetopes import (
    ARROW,
    POINT,
    Isomorphism,
    Node,
    Opetope,
    build,
    enumerate_opetopes,
    is_isomorphic,
    isomorphism,
    make_opetope,
    node,
    null,
    parse_code,
    polygon,
)

__all__ = [
    "ARROW",
    "POINT",
    "Isomorphism",
    "Node",
    "Opetope",
    "build",
    "enumerate_opetopes",
    "is_isomorphic",
    "isomorphism",
    "make_opetope",
    "node",
    "null",
    "parse_code",
    "polygon",
]
