"""Run-level settings shared by the CLI and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class RunConfig:
    threads: int = 1
    cache_dir: str | None = None   # None: $CMTORSION_CACHE, then ~/.cache/cmtorsion
    use_cache: bool = True
    offline: bool = False          # never compute class numbers missing from the cache
    method: str = "auto"
    unconditional_only: bool = False

    def __post_init__(self):
        if self.threads < 1:
            raise DomainError("threads must be >= 1")
        if self.unconditional_only and self.method == "bsgs":
            raise DomainError("bsgs is conditional and unconditional_only forbids it")

    @property
    def sweep_method(self) -> str:
        return "rootcount" if self.method == "auto" else self.method

    def table_source(self, executor=None, progress=None):
        from .cache import TableSource
        return TableSource(self.cache_dir, offline=self.offline, method=self.sweep_method,
                           executor=executor, progress=progress,
                           use_cache=self.use_cache and self.sweep_method != "bsgs")
