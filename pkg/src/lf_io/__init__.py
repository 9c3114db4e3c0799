"""
Persistence of light fields, disparity fields, coded images, coded models and reports
"""

from .atomic import atomic_write_bytes, atomic_write_text
from .coded_store import load_coded, load_model, save_coded, save_model
from .disparity_store import load_disparity, save_disparity
from .images import load_image, save_image
from .light_fields import load_lf, save_lf
from .manifest import FORMAT_VERSION, CaptureManifest, DisparityManifest, LfManifest, read_manifest, write_manifest
from .pfm import read_pfm, write_pfm
from .reports import load_report, save_report

__all__ = [
    "CaptureManifest",
    "DisparityManifest",
    "FORMAT_VERSION",
    "LfManifest",
    "atomic_write_bytes",
    "atomic_write_text",
    "load_coded",
    "load_disparity",
    "load_image",
    "load_lf",
    "load_model",
    "load_report",
    "read_manifest",
    "read_pfm",
    "save_coded",
    "save_disparity",
    "save_image",
    "save_lf",
    "save_model",
    "save_report",
    "write_manifest",
    "write_pfm",
]
