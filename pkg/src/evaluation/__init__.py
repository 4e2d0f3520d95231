"""
Classification metrics, k-fold cross-validation and grid search.

Import from the submodules directly (src.evaluation.metrics,
src.evaluation.crossval, src.evaluation.grid); crossval depends on
src.app.pipeline, which itself depends on metrics.
"""
