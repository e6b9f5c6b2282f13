"""Small utilities shared by the pipeline and CLI tests."""

import hashlib
import shutil
from pathlib import Path

import numpy as np

from bitextkit.synthetic import bundled_fixture


def copy_fixture(dest: Path) -> Path:
    """Copy the bundled fixture to ``dest`` and return the config path."""
    shutil.copytree(bundled_fixture(), dest)
    return dest / "config.json"


def hashed_embedder(sentences, lang):
    """Bag of hashed lowercase words, one row per sentence; used as a plug-in embedder."""
    rows = np.full((len(sentences), 16), 1e-3)
    for i, s in enumerate(sentences):
        for word in s.lower().split():
            h = int(hashlib.md5(word.encode("utf-8")).hexdigest(), 16)
            rows[i, h % 16] += 1.0
    return rows
