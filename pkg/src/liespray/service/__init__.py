"""HTTP service wrapping the core package.

``liespray.service.app`` hosts the FastAPI application (module attribute
``app``); the request and response schemas live in
``liespray.service.models``.  The CLI drives the same handler functions in
process.
"""

from . import models  # noqa: F401
