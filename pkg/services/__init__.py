"""Service layer for sweeps, analysis, corpora and result storage."""
from .sweep_service import SweepService, SweepConfig, SweepCell, SweepMode, SweepConfigError
from .analysis_service import AnalysisService, RaggedGridError, InsufficientLevelsError, LevelMean
from .corpus_service import CorpusService
from .export_service import ExportService
from .run_store import RunStore, RunNotFoundError
from .presets import get_sweep_preset, SWEEP_PRESETS

__all__ = [
    'SweepService', 'SweepConfig', 'SweepCell', 'SweepMode', 'SweepConfigError',
    'AnalysisService', 'RaggedGridError', 'InsufficientLevelsError', 'LevelMean',
    'CorpusService', 'ExportService', 'RunStore', 'RunNotFoundError',
    'get_sweep_preset', 'SWEEP_PRESETS'
]
