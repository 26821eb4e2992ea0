import numpy as np
import pytest
from PIL import Image

MANIFEST_HEADER = (
    "path,system,params,tile_index,split,fdim_mean,fdim_std,sb_mean,sb_std,"
    "sbb_mean,sbb_std,wada,num_labels,seed"
)


def write_dataset(root, n_train=64, n_val=8, n_test=16, size=32, seed=0,
                  balanced_wada=True):
    """Synthetic dataset in the documented interface format: PNGs + manifest."""
    rng = np.random.default_rng(seed)
    lines = [MANIFEST_HEADER]
    counter = 0
    for split, system, count in (
        ("train", "duffing", n_train),
        ("validation", "pendulum", n_val),
        ("test", "magnetic", n_test),
    ):
        for k in range(count):
            name = f"{system}_{counter:05d}_t0.png"
            counter += 1
            labels = rng.integers(0, 4, size=(size, size)).astype(np.uint8)
            Image.fromarray(labels, mode="L").save(root / name)
            fdim = 1.0 + rng.random()
            sb = rng.random() * 0.8
            sbb = sb + rng.random() * 0.5
            wada = (k % 2 == 0) if balanced_wada else bool(rng.random() < 0.5)
            lines.append(
                f"{name},{system},{{}},0,{split},{fdim!r},0.001,{sb!r},0.001,"
                f"{sbb!r},0.001,{'true' if wada else 'false'},4,{k}"
            )
    manifest = root / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


@pytest.fixture(scope="session")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("dataset")
    manifest = write_dataset(root)
    return manifest
