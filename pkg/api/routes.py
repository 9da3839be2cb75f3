"""Application routes."""
from flask import Blueprint, jsonify

from distributions.presets import FAMILY_PRESETS
from services.presets import SWEEP_PRESETS

bp = Blueprint('main', __name__)


@bp.route('/health', methods=['GET'])
def health():
    return jsonify({'status': 'ok'}), 200


@bp.route('/')
def index():
    """Endpoint map plus the preset names a sweep body may use."""
    return jsonify({
        'name': 'Hierarchical Selection Model API',
        'status': 'running',
        'endpoints': {
            'health': '/health',
            'model': '/api/model/*',
            'fit': '/api/fit/*',
            'sweeps': '/api/sweeps/*'
        },
        'sweep_presets': sorted(SWEEP_PRESETS),
        'family_presets': sorted(FAMILY_PRESETS),
    })
