"""
Application layer: end-to-end pipelines, model bundles, reporting and the
published-experiment runners.

Import from the submodules directly (src.app.pipeline, src.app.bundle, ...).
"""
