"""
Utility functions
"""

import argparse
import hashlib
import json
import os
import pathlib
from typing import Any, Callable, Dict, Optional

import numpy as np
import packaging.version
from importlib_resources import files

from .logging import get_logger

__version__ = "1.0.0"

logger = get_logger(__name__)

CACHE_ENV = "AIRY2_CACHE_DIR"
REFERENCE_FILE = "reference.json"


def cache_dir() -> pathlib.Path:
    """Return the on-disk cache directory, creating it if needed."""
    base = os.getenv(CACHE_ENV)
    if base:
        path = pathlib.Path(base)
    else:
        path = pathlib.Path.home() / ".cache" / "airy2_cli"
    path.mkdir(parents=True, exist_ok=True)
    return path


def param_hash(name: str, params: Dict[str, Any]) -> str:
    """Stable hash of a named parameter record"""
    record = json.dumps(
        {"name": name, "params": params}, sort_keys=True, default=str
    )
    return hashlib.sha256(record.encode("utf-8")).hexdigest()


def version_compatible(version: str) -> bool:
    """Check that a cache entry was written by this major.minor version"""
    try:
        theirs = packaging.version.Version(version)
    except packaging.version.InvalidVersion:
        return False
    ours = packaging.version.Version(__version__)
    return theirs.release[:2] == ours.release[:2]


def load_cached(key: str) -> Optional[Dict[str, np.ndarray]]:
    """Load a cached array bundle, or None on a miss"""
    path = cache_dir() / f"{key}.npz"
    if not path.is_file():
        logger.debug("cache miss: %s", key)
        return None
    try:
        with np.load(path, allow_pickle=False) as data:
            bundle = {k: data[k] for k in data.files}
    except (OSError, ValueError) as err:
        logger.warning("Ignoring unreadable cache entry %s: %s", path, err)
        return None
    version = str(bundle.pop("version", ""))
    if not version_compatible(version):
        logger.info(
            "Ignoring cache entry %s written by version '%s'", path, version
        )
        return None
    logger.info("cache hit: %s", key)
    return bundle


def store_cached(key: str, arrays: Dict[str, np.ndarray]) -> pathlib.Path:
    """Write an array bundle to the cache"""
    path = cache_dir() / f"{key}.npz"
    tmp_path = path.with_suffix(".tmp.npz")
    np.savez(tmp_path, version=np.array(__version__), **arrays)
    os.replace(tmp_path, path)
    logger.debug("cached: %s", path)
    return path


def reference_data() -> Dict[str, Any]:
    """Published reference values shipped with the package"""
    text = files("airy2_cli.data").joinpath(REFERENCE_FILE).read_text()
    return json.loads(text)


def path_arg(
    exists: Optional[bool] = None,
    is_dir: Optional[bool] = None,
    is_file: Optional[bool] = None,
) -> Callable[[str], pathlib.Path]:
    """pathlib checked types for argparse"""

    def _path_arg(arg: str) -> pathlib.Path:
        p = pathlib.Path(arg)

        attrs = [exists, is_dir, is_file]
        attr_names = ["exists", "is_dir", "is_file"]

        for attr_val, attr_name in zip(attrs, attr_names):
            if attr_val is None:  # Skip attributes that are not defined
                continue

            m = getattr(p, attr_name)
            if m() != attr_val:
                raise argparse.ArgumentTypeError(
                    "The supplied path argument needs the attribute"
                    f" {attr_name}={attr_val}, but {attr_name}={m()}"
                )
        return p

    return _path_arg
