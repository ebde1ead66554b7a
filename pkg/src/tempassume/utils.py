import hashlib
import importlib
import logging
import pkgutil

import numpy as np

logger = logging.getLogger(__name__)


def import_submodules(module):
    """Import all submodules of a module, recursively"""
    for _loader, module_name, _is_pkg in pkgutil.walk_packages(
            module.__path__, module.__name__ + '.'):
        importlib.import_module(module_name)


def derive_seed(master: int, *path: int | str) -> int:
    """Derive a child seed by hashing the master seed with a path of labels.

    Trial seeds depend only on (master, trial index), so the order in which
    trials execute cannot change their randomness.
    """
    h = hashlib.sha256(str(master).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def make_rng(master: int, *path: int | str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, *path))


def payload_hash(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()[:16]


def digest_lines(lines: list[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()
