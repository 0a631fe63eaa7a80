"""Global size caps.

Everything in this package is exact and exhaustive, so the only defence
against runaway inputs is a caps record.  The defaults are desk-scale; the
``USMOD_CAPS`` environment variable overrides individual fields with a
comma-separated list such as ``ring=32,module=64,hom=5000``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import ConfigError


@dataclass(frozen=True)
class Caps:
    max_ring: int = 64          # elements in a constructed ring
    max_module: int = 128       # elements in a constructed module
    max_lattice: int = 512      # submodules enumerated per module
    max_hom: int = 20000        # projected homomorphism-search space
    max_iso_search: int = 40320 # bijections tried by ring-isomorphism search

    def check(self) -> None:
        if min(self.max_ring, self.max_module, self.max_lattice, self.max_hom) < 2:
            raise ConfigError("caps must be at least 2")


_FIELDS = ("ring", "module", "lattice", "hom", "iso_search")


def caps_from_env(base: Caps | None = None) -> Caps:
    """Apply USMOD_CAPS overrides (``name=value`` pairs) on top of *base*."""
    caps = base or Caps()
    raw = os.environ.get("USMOD_CAPS", "").strip()
    if not raw:
        return caps
    updates = {}
    for item in raw.split(","):
        if not item.strip():
            continue
        try:
            key, value = item.split("=")
            key = key.strip()
            if key not in _FIELDS:
                raise ValueError(key)
            updates["max_" + key] = int(value)
        except ValueError:
            raise ConfigError(f"bad USMOD_CAPS entry: {item!r}") from None
    caps = replace(caps, **updates)
    caps.check()
    return caps


DEFAULT_CAPS = Caps()
