import logging

from .expr import parse, evaluate, eval_jet, Dual4
from .surfaces import ExprSurface, SurfaceGrid
from .frames import FrameField, gauge_transform
from .invariants import analyze, SurfaceAnalysis, SurfaceType
from .generator import (
    GeneratorInput, generate, closed_form_preset, improper_sphere_phi
)
from .verify import run_verification, VerificationReport
from . import version, errors, extensions

__version__ = version.__version__

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    'parse', 'evaluate', 'eval_jet', 'Dual4', 'ExprSurface', 'SurfaceGrid',
    'FrameField', 'gauge_transform', 'analyze', 'SurfaceAnalysis',
    'SurfaceType', 'GeneratorInput', 'generate', 'closed_form_preset',
    'improper_sphere_phi', 'run_verification', 'VerificationReport',
    'errors', 'extensions'
]
