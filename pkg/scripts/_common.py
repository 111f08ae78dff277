"""Shared helpers: dataclass configs become command-line flags."""

import argparse
import csv
import dataclasses
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager


def parse_config(cls, argv=None):
    """Build an instance of the dataclass ``cls`` from ``--field value`` flags."""
    p = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        if f.type in (bool, "bool"):
            p.add_argument(flag, action=argparse.BooleanOptionalAction, default=f.default)
        elif f.type in (tuple, "tuple[int, ...]"):
            p.add_argument(flag, type=lambda s: int(float(s)), nargs="+", default=f.default)
        else:
            conv = {"int": lambda s: int(float(s)), "float": float}.get(str(f.type), str)
            p.add_argument(flag, type=conv, default=f.default)
    ns = p.parse_args(argv)
    return cls(**{f.name: getattr(ns, f.name) for f in dataclasses.fields(cls)})


@contextmanager
def pool(threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            yield ex
    else:
        yield None


@contextmanager
def timed(label):
    t0 = time.perf_counter()
    yield
    print(f"[{label}] {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def write_csv(path, rows):
    if not path or not rows:
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {path}", file=sys.stderr)
