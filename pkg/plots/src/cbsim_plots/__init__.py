"""Figure rendering for results CSVs written by the cbsim CLI."""

from .figures import (
    CSV_HEADER,
    CurveSpec,
    FigureRecipe,
    RECIPES,
    RecipeError,
    RenderSummary,
    recipe_for,
    render,
    render_figure,
)

__all__ = [
    "CSV_HEADER",
    "CurveSpec",
    "FigureRecipe",
    "RECIPES",
    "RecipeError",
    "RenderSummary",
    "recipe_for",
    "render",
    "render_figure",
]
