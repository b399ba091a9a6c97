"""Tokenization and vocabularies for questions, prompts and answers."""

import re

import numpy as np

from groundvqa.core.errors import VocabularyError

###################################################################################################
###################################################################################################

PAD_TOKEN = '<pad>'
UNK_TOKEN = '<unk>'
TOKEN_PATTERN = re.compile(r"[^\s]+")

###################################################################################################
###################################################################################################

def tokenize(text):
    """Split text into lowercase tokens.

    Parameters
    ----------
    text : str
        Text to tokenize.

    Returns
    -------
    list of str
        Whitespace separated, lowercased tokens, with surrounding punctuation removed.

    Examples
    --------
    >>> tokenize('Where is the cup? Track the red cup')
    ['where', 'is', 'the', 'cup', 'track', 'the', 'red', 'cup']
    """

    tokens = [token.strip('.,;:!?"\'()') for token in TOKEN_PATTERN.findall(text.lower())]

    return [token for token in tokens if token]


class TokenVocabulary():
    """Mapping between prompt tokens and integer ids.

    Parameters
    ----------
    tokens : list of str
        Known tokens. Ids 0 and 1 are reserved for padding and unknown tokens.

    Attributes
    ----------
    tokens : list of str
        Every token, in id order, including the reserved tokens.
    """

    def __init__(self, tokens):
        """Initialize the vocabulary."""

        self.tokens = [PAD_TOKEN, UNK_TOKEN] + \
            [token for token in dict.fromkeys(tokens) if token not in (PAD_TOKEN, UNK_TOKEN)]
        self._ids = {token : ind for ind, token in enumerate(self.tokens)}


    def __len__(self):
        """Define the length of the vocabulary as the number of token ids."""

        return len(self.tokens)


    @property
    def pad_id(self):
        """Id of the padding token."""
        return 0


    @property
    def unk_id(self):
        """Id of the unknown token."""
        return 1


    @classmethod
    def from_texts(cls, texts):
        """Build a vocabulary of every token in a collection of texts, in sorted order."""

        return cls(sorted({token for text in texts for token in tokenize(text)}))


    def encode(self, text, max_tokens):
        """Encode a text into a fixed-length array of token ids.

        Parameters
        ----------
        text : str
            Text to encode.
        max_tokens : int
            Length of the output. Longer texts are truncated.

        Returns
        -------
        ids : 1d array of int
            Token ids, padded with the padding id.
        mask : 1d array of bool
            True for padding positions.

        Notes
        -----
        Out-of-vocabulary tokens map to the unknown id.
        """

        ids = [self._ids.get(token, self.unk_id) for token in tokenize(text)][:max_tokens]
        if not ids:
            ids = [self.unk_id]

        out = np.full(max_tokens, self.pad_id, dtype=np.int64)
        out[:len(ids)] = ids

        return out, out == self.pad_id


class AnswerVocabulary():
    """Closed, ordered set of answers, with a bijection between answers and indices.

    Parameters
    ----------
    answers : list of str
        Answers. Must be non-empty and unique.

    Raises
    ------
    VocabularyError
        If the answers are empty or contain duplicates.
    """

    def __init__(self, answers):
        """Initialize the vocabulary."""

        answers = list(answers)
        if not answers:
            raise VocabularyError("An answer vocabulary can not be empty.")
        if len(set(answers)) != len(answers):
            raise VocabularyError("Answer vocabulary entries must be unique.")

        self.answers = answers
        self._inds = {answer : ind for ind, answer in enumerate(answers)}


    def __len__(self):
        """Define the length of the vocabulary as the number of answers."""

        return len(self.answers)


    def __contains__(self, answer):
        """Check whether an answer is in the vocabulary."""

        return answer in self._inds


    def to_index(self, answer):
        """Get the index of an answer.

        Raises
        ------
        VocabularyError
            If the answer is not in the vocabulary.
        """

        if answer not in self._inds:
            raise VocabularyError("Answer '{}' is not in the vocabulary.".format(answer))

        return self._inds[answer]


    def to_answer(self, index):
        """Get the answer at an index."""

        return self.answers[index]
