"""Recognition from image gradient orientations on the complex sphere.

Feature extraction (first/second-order gradient orientations or raw
intensities), complex linear subspace learning, ridge-coding and
nearest-neighbor classifiers, and a reproducible occlusion benchmark.
"""

from .classify import (
    CrcCoder,
    RealDictionary,
    crc_classify,
    crc_code,
    crc_fit,
    nnc_classify,
    stack_real_imag,
)
from .dataset import (
    Manifest,
    ManifestEntry,
    OcclusionSpec,
    load_image,
    load_manifest,
    occlude,
    resize,
    save_image,
)
from .errors import DataError, NumericError
from .gradientfield import (
    GradientPair,
    complex_map,
    extract,
    first_order_gradients,
    orientation_field,
    second_order_gradients,
)
from .pipeline import Recognizer, RecognizerConfig, fit, load, predict, save
from .subspace import SubspaceModel, fit_complex_pca, project, reconstruction_error

__version__ = "0.1.0"

__all__ = [
    "CrcCoder",
    "DataError",
    "GradientPair",
    "Manifest",
    "ManifestEntry",
    "NumericError",
    "OcclusionSpec",
    "RealDictionary",
    "Recognizer",
    "RecognizerConfig",
    "SubspaceModel",
    "complex_map",
    "crc_classify",
    "crc_code",
    "crc_fit",
    "extract",
    "fit",
    "fit_complex_pca",
    "first_order_gradients",
    "load",
    "load_image",
    "load_manifest",
    "nnc_classify",
    "occlude",
    "orientation_field",
    "predict",
    "project",
    "reconstruction_error",
    "resize",
    "save",
    "save_image",
    "second_order_gradients",
    "stack_real_imag",
]
