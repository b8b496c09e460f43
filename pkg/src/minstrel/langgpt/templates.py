"""Element template expanders for the two basic writing patterns."""

from __future__ import annotations

from .errors import EmptySlotError, NoActionsError
from .model import Action, Assignment


def expand_assignment(property: str, value: str) -> Assignment:
    """Build the assignment element ``The <property> is <value>.``"""
    if not property.strip() or not value.strip():
        raise EmptySlotError("assignment needs a non-empty property and value")
    return Assignment(property=property, value=value)


def expand_action(
    input_property: str,
    input_value: str,
    actions: list[str] | tuple[str, ...],
    result: str | None = None,
) -> Action:
    """Build the function-like element.

    Renders as ``For the given <p> of <v>, please execute the following
    actions:`` followed by the ordered steps; the ``Return the <result>.``
    clause is omitted when ``result`` is None.
    """
    if not actions:
        raise NoActionsError("an action needs at least one step")
    if not input_property.strip() or not input_value.strip():
        raise EmptySlotError("action needs a non-empty input property and value")
    return Action(
        input_property=input_property,
        input_value=input_value,
        actions=tuple(actions),
        result=result,
    )
