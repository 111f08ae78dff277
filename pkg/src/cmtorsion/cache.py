"""Text cache for class-number tables.

One ``ell,h`` record per line in ascending ell, closed by ``#complete,<L>``.
A file without the closing line is a partial table: it may be extended by a
later sweep but is never trusted as complete.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .classnum import ClassNumberTable, class_number_sweep
from .errors import CacheFormatError, CacheIntegrityError, DependencyError

ENV_VAR = "CMTORSION_CACHE"
DEFAULT_DIR = Path.home() / ".cache" / "cmtorsion"
TERMINATOR = "#complete"


def resolve_cache_dir(flag: str | os.PathLike | None = None) -> Path:
    """Flag beats environment beats the default location."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else DEFAULT_DIR


def cache_path(cache_dir: Path, L: int) -> Path:
    return Path(cache_dir) / f"h_minus_ell_{L}.csv"


def cache_store(path: str | os.PathLike, table: ClassNumberTable) -> None:
    table.check_invariants()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{e},{h}" for e, h in zip(table.ells.tolist(), table.hs.tolist())]
    if table.complete:
        lines.append(f"{TERMINATOR},{table.upper_bound}")
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n" if lines else "")
    os.replace(tmp, path)


def cache_load(path: str | os.PathLike) -> ClassNumberTable:
    path = Path(path)
    ells, hs = [], []
    bound = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if bound is not None:
                raise CacheFormatError(path, lineno, "data after the completion marker")
            if line.startswith("#"):
                tag, _, val = line.partition(",")
                if tag != TERMINATOR or not val.isdigit():
                    raise CacheFormatError(path, lineno, f"bad marker {line!r}")
                bound = int(val)
                continue
            parts = line.split(",")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise CacheFormatError(path, lineno, f"expected 'ell,h', got {line!r}")
            ell, h = int(parts[0]), int(parts[1])
            if ells and ell <= ells[-1]:
                raise CacheIntegrityError(f"{path}:{lineno}: ell {ell} not above previous {ells[-1]}")
            if h % 2 == 0:
                raise CacheIntegrityError(f"{path}:{lineno}: h(-{ell}) = {h} is even, violating genus parity")
            ells.append(ell)
            hs.append(h)
    complete = bound is not None
    upper = bound if complete else (ells[-1] if ells else 0)
    table = ClassNumberTable(upper, np.array(ells, dtype=np.int64), np.array(hs, dtype=np.int64),
                             complete=complete, provenance="cache")
    table.check_invariants()
    if complete:
        if ells and ells[-1] > bound:
            raise CacheIntegrityError(f"{path}: entry {ells[-1]} beyond declared bound {bound}")
        table.check_complete()
    return table


def find_table(cache_dir: Path, L: int) -> ClassNumberTable | None:
    """Smallest complete cached table covering L, else the largest table
    below L (complete or not) as a starting point for extension."""
    cache_dir = Path(cache_dir)
    if not cache_dir.is_dir():
        return None
    best_complete, best_partial = None, None
    for p in sorted(cache_dir.glob("h_minus_ell_*.csv")):
        try:
            t = cache_load(p)
        except (CacheFormatError, CacheIntegrityError, OSError):
            continue
        if t.complete and t.upper_bound >= L:
            if best_complete is None or t.upper_bound < best_complete.upper_bound:
                best_complete = t
        elif best_partial is None or t.upper_bound > best_partial.upper_bound:
            best_partial = t
    if best_complete is not None:
        return best_complete.restrict(L)
    return best_partial


class TableSource:
    """Hands out complete class-number tables, backed by an optional cache.

    ``offline`` forbids computing anything missing from the cache; the
    request then fails with DependencyError. Hits and misses are counted
    so callers can report them.
    """

    def __init__(self, cache_dir: str | os.PathLike | None = None, offline: bool = False,
                 method: str = "rootcount", executor=None, progress=None, use_cache: bool = True):
        self.cache_dir = resolve_cache_dir(cache_dir) if use_cache else None
        self.offline = offline
        self.method = method
        self.executor = executor
        self.progress = progress
        self.hits = 0
        self.misses = 0
        self.provenance: set[str] = set()
        self._memo: ClassNumberTable | None = None

    def table(self, L: int) -> ClassNumberTable:
        L = max(L, 7)
        if self._memo is not None and self._memo.upper_bound >= L:
            return self._memo.restrict(L)
        found = find_table(self.cache_dir, L) if self.cache_dir is not None else None
        if found is not None and found.complete and found.upper_bound >= L:
            self.hits += 1
            self.provenance.add(found.provenance)
            self._memo = found
            return found
        if self.offline:
            raise DependencyError(f"no complete class-number cache up to {L} in {self.cache_dir}")
        self.misses += 1
        t = class_number_sweep(L, self.method, executor=self.executor, start=found,
                               progress=self.progress)
        self.provenance.add(t.provenance)
        if self.cache_dir is not None:
            cache_store(cache_path(self.cache_dir, L), t)
        self._memo = t
        return t
