"""Composition of the textual input of the grounding stage."""

from groundvqa.core.errors import PromptError
from groundvqa.data import Prompt

###################################################################################################
###################################################################################################

TRACK_TEMPLATE = '{question} Track the {answer}'
PROMPT_MODES = ('answer', 'question')


def compose(question, answer, answer_source='oracle'):
    """Compose a grounding prompt from a question and its answer.

    Parameters
    ----------
    question : str
        The question.
    answer : str
        The answer to append.
    answer_source : {'model', 'oracle', 'external'}, optional, default: 'oracle'
        Where the answer came from. Recorded as provenance only.

    Returns
    -------
    Prompt
        Prompt with text "{question} Track the {answer}".

    Raises
    ------
    PromptError
        If the question is empty, or the answer is empty after trimming whitespace.

    Notes
    -----
    Segments are joined by exactly one space, and no other normalization is applied:
    question punctuation and answer casing are passed through as given.

    Examples
    --------
    >>> compose('Where is the cup?', 'red cup').text
    'Where is the cup? Track the red cup'
    """

    if not question:
        raise PromptError("Can not compose a prompt for an empty question.")
    if answer is None or not answer.strip():
        raise PromptError("Can not compose a prompt with an empty answer.")

    return Prompt(TRACK_TEMPLATE.format(question=question, answer=answer),
                  question, answer, answer_source)


def compose_question_only(question):
    """Compose a grounding prompt from the question alone.

    Parameters
    ----------
    question : str
        The question.

    Returns
    -------
    Prompt
        Prompt whose text is the question, with no answer appended.

    Raises
    ------
    PromptError
        If the question is empty.
    """

    if not question:
        raise PromptError("Can not compose a prompt for an empty question.")

    return Prompt(question, question, None, 'none')


def build_prompt(question, answer=None, mode='answer', answer_source='oracle'):
    """Build a prompt in a given mode.

    Parameters
    ----------
    question : str
        The question.
    answer : str, optional
        The answer. Required if mode is 'answer'.
    mode : {'answer', 'question'}
        Whether to append the answer to the question, or to use the question alone.
    answer_source : {'model', 'oracle', 'external'}, optional, default: 'oracle'
        Where the answer came from.

    Returns
    -------
    Prompt
        The composed prompt.
    """

    if mode not in PROMPT_MODES:
        raise ValueError("Prompt mode {} not understood.".format(mode))

    if mode == 'question':
        return compose_question_only(question)

    return compose(question, answer, answer_source)
