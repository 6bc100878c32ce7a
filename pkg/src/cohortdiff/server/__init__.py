from .app import Session, create_app

__all__ = ["Session", "create_app"]
