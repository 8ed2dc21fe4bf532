"""Adapter container helpers."""

from caipart.adapters.container.app_container import AppContainer

__all__ = ["AppContainer"]
