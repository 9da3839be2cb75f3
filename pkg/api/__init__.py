"""API routes."""
from flask import Flask

from .routes import bp
from .model_routes import bp as model_bp
from .fit_routes import bp as fit_bp
from .sweep_routes import bp as sweep_bp


def register_blueprints(app: Flask) -> None:
    app.register_blueprint(bp)
    app.register_blueprint(model_bp)
    app.register_blueprint(fit_bp)
    app.register_blueprint(sweep_bp)


__all__ = ['bp', 'model_bp', 'fit_bp', 'sweep_bp', 'register_blueprints']
