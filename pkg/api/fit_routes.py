"""Fit API routes."""
from flask import Blueprint, request, jsonify, current_app

from config import get_two_term_grid
from fitkit import (
    RankedSeries, fit_power_loglog, fit_shifted_power, fit_two_term_power,
    series_from_frequencies
)

bp = Blueprint('fit', __name__, url_prefix='/api/fit')


def _xy(data: dict):
    xs, ys = data.get('xs'), data.get('ys')
    if xs is None or ys is None:
        raise ValueError("Body must contain 'xs' and 'ys'")
    return [float(x) for x in xs], [float(y) for y in ys]


@bp.route('/power', methods=['POST'])
def power():
    """
    Power-law fit of a rank-frequency series.

    Body: frequencies (any order), optional space ('log' or 'raw') and max_rank.
    """
    try:
        data = request.get_json() or {}
        if 'frequencies' not in data:
            raise ValueError("Body must contain 'frequencies'")
        series: RankedSeries = series_from_frequencies([float(f) for f in data['frequencies']])
        max_rank = data.get('max_rank')
        series = series.truncate(int(max_rank) if max_rank is not None else None)
        fit = fit_power_loglog(series, space=data.get('space', 'log'))
        return jsonify(fit.to_dict()), 200

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/two-term', methods=['POST'])
def two_term():
    try:
        xs, ys = _xy(request.get_json() or {})
        grid = get_two_term_grid(current_app)
        fit = fit_two_term_power(xs, ys, b_grid=grid, d_grid=grid)
        return jsonify(fit.to_dict()), 200

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/shifted', methods=['POST'])
def shifted():
    try:
        data = request.get_json() or {}
        xs, ys = _xy(data)
        if 'shift' not in data:
            raise ValueError("Body must contain 'shift'")
        fit = fit_shifted_power(xs, ys, float(data['shift']), space=data.get('space', 'raw'))
        return jsonify(fit.to_dict()), 200

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500
