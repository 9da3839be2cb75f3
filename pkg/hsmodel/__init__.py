"""Hierarchical Selection Model instances and frequency generation."""
from .model import (
    HierarchySpec, ModelInstance, FrequencyTable,
    apportion, build_instance, exact_pmf, simulate, expected_frequencies
)

__all__ = [
    'HierarchySpec', 'ModelInstance', 'FrequencyTable',
    'apportion', 'build_instance', 'exact_pmf', 'simulate', 'expected_frequencies'
]
