"""Sweep API routes: run small sweeps and analyse stored runs."""
import logging

from flask import Blueprint, request, jsonify, current_app

from services.analysis_service import AnalysisService, InsufficientLevelsError
from services.presets import get_sweep_preset, resolve_sweep_preset
from services.run_store import RunStore, RunNotFoundError
from services.sweep_service import SweepConfig, SweepService

logger = logging.getLogger(__name__)

bp = Blueprint('sweeps', __name__, url_prefix='/api/sweeps')


def _summary(cells):
    try:
        return AnalysisService.goodness_summary(cells)
    except InsufficientLevelsError:
        return None


def _config_from_body(data: dict) -> SweepConfig:
    preset = data.get('preset')
    if preset:
        options = data.get('options') or {}
        config = get_sweep_preset(preset, **options)
        overrides = {k: v for k, v in data.items() if k not in ('preset', 'options')}
        if overrides:
            config = SweepConfig.from_mapping(overrides, defaults=config)
        return config
    return SweepConfig.from_mapping(data)


@bp.route('', methods=['POST'])
def create_sweep():
    """
    Run a sweep synchronously and store it.

    Body: either a preset name (with optional ``options`` and flat overrides)
    or a flat sweep configuration. Sweeps above HSM_API_MAX_CELLS cells are
    refused; run those through the ``flask hsm sweep`` command instead.
    """
    try:
        data = request.get_json()
        if not data:
            return jsonify({'error': 'Sweep configuration is required'}), 400

        config = _config_from_body(data)
        limit = current_app.config.get('HSM_API_MAX_CELLS', 400)
        if config.n_cells > limit:
            return jsonify({
                'error': f'Sweep has {config.n_cells} cells; the API runs at most {limit}'
            }), 400

        preset = data.get('preset')
        run = RunStore.start_run(config, preset=resolve_sweep_preset(preset) if preset else None)
        try:
            cells = SweepService.run_sweep(config)
        except Exception as e:
            RunStore.fail_run(run.id, str(e))
            raise
        run = RunStore.finish_run(run.id, cells, summary=_summary(cells))
        return jsonify(run.to_dict()), 201

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.exception("Sweep request failed")
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('', methods=['GET'])
def list_sweeps():
    try:
        limit = request.args.get('limit', default=50, type=int)
        return jsonify([run.to_dict() for run in RunStore.list_runs(limit)]), 200
    except Exception as e:
        return jsonify({'error': str(e)}), 500


@bp.route('/<int:run_id>', methods=['GET'])
def get_sweep(run_id):
    """Stored run with all of its cells."""
    try:
        run = RunStore.get_run(run_id)
        result = run.to_dict()
        result['cells'] = [cell.to_dict() for cell in RunStore.load_cells(run_id)]
        return jsonify(result), 200
    except RunNotFoundError as e:
        return jsonify({'error': str(e)}), 404
    except Exception as e:
        return jsonify({'error': str(e)}), 500


@bp.route('/<int:run_id>/contour', methods=['GET'])
def get_contour(run_id):
    try:
        cells = RunStore.load_cells(run_id)
        grid = AnalysisService.contour_grid(
            cells,
            x_factor=request.args.get('x', default='ratio_m', type=str),
            y_factor=request.args.get('y', default='ratio_c', type=str),
            response=request.args.get('response', default='adj_r2', type=str),
        )
        return jsonify(grid.to_dict()), 200
    except RunNotFoundError as e:
        return jsonify({'error': str(e)}), 404
    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/<int:run_id>/trends', methods=['GET'])
def get_trends(run_id):
    try:
        trends = AnalysisService.exponent_trends(RunStore.load_cells(run_id))
        return jsonify({
            varied: [t.to_dict() for t in family] for varied, family in trends.items()
        }), 200
    except RunNotFoundError as e:
        return jsonify({'error': str(e)}), 404
    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/<int:run_id>/anova', methods=['GET'])
def get_anova(run_id):
    """One-way ANOVA per factor; ``factors`` is an optional comma-separated list."""
    try:
        cells = RunStore.load_cells(run_id)
        factors = request.args.get('factors', type=str)
        kwargs = {}
        if factors:
            kwargs['factors'] = [f.strip() for f in factors.split(',') if f.strip()]
        results = AnalysisService.anova_over_sweep(cells, **kwargs)
        return jsonify([r.to_dict() for r in results]), 200
    except RunNotFoundError as e:
        return jsonify({'error': str(e)}), 404
    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/<int:run_id>/regression', methods=['GET'])
def get_regression(run_id):
    try:
        result = AnalysisService.exponent_regression(RunStore.load_cells(run_id))
        return jsonify(result.to_dict()), 200
    except RunNotFoundError as e:
        return jsonify({'error': str(e)}), 404
    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500
