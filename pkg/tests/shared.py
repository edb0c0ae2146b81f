"""Session-wide memoised tables and the acceptance result log."""

from functools import lru_cache

from cellcentre import build_group, build_jring, build_kl_table, cell_partition

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def tables(type_name: str):
    """(group, KL table, cell partition), built once per session."""
    g = build_group(type_name)
    kl = build_kl_table(g)
    return g, kl, cell_partition(kl)


@lru_cache(maxsize=None)
def jring(type_name: str, cell: int):
    g, kl, part = tables(type_name)
    return build_jring(kl, part, cell)
