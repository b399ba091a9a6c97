"""Client for answering questions with an external answering service."""

import json
import socket
from urllib.error import HTTPError, URLError
from urllib.request import Request, urlopen

from groundvqa.core.errors import (ExternalTimeoutError, ExternalConnectionError,
                                   ExternalProtocolError, MalformedResponseError)
from groundvqa.data import AnswerResult

###################################################################################################
###################################################################################################

def external_answer(endpoint, video_id, question):
    """Answer a question by querying an external answering service.

    Parameters
    ----------
    endpoint : ExternalEndpoint
        URL of the service, and the request timeout.
    video_id : str
        Identifier of the video the question is about.
    question : str
        Question to answer.

    Returns
    -------
    AnswerResult
        The service's answer, with source 'external'.

    Raises
    ------
    ExternalTimeoutError
        If the service does not respond within the timeout.
    ExternalConnectionError
        If the service can not be reached.
    ExternalProtocolError
        If the service responds with a non-2xx status.
    MalformedResponseError
        If the response is not a JSON object with a non-empty string 'answer',
        or has a 'confidence' outside of [0, 1].

    Notes
    -----
    The request is a JSON POST of {"video_id", "question"}, and the response a JSON
    object {"answer", "confidence"}. A response without a confidence gets a confidence of 1.
    """

    body = json.dumps({'video_id' : video_id, 'question' : question}).encode('utf-8')
    request = Request(endpoint.url, data=body, method='POST',
                      headers={'Content-Type' : 'application/json'})

    try:
        with urlopen(request, timeout=endpoint.timeout) as response:
            contents = response.read()
    except HTTPError as excp:
        raise ExternalProtocolError("Answering service returned status {}.".format(\
            excp.code)) from excp
    except (socket.timeout, TimeoutError) as excp:
        raise ExternalTimeoutError("Answering service did not respond within {} s.".format(\
            endpoint.timeout)) from excp
    except URLError as excp:
        if isinstance(excp.reason, (socket.timeout, TimeoutError)):
            raise ExternalTimeoutError("Answering service did not respond within {} s.".format(\
                endpoint.timeout)) from excp
        raise ExternalConnectionError("Can not reach the answering service at {}: {}.".format(\
            endpoint.url, excp.reason)) from excp

    return parse_answer_response(contents)


def parse_answer_response(contents):
    """Parse the body of an answering service response.

    Parameters
    ----------
    contents : bytes or str
        Response body.

    Returns
    -------
    AnswerResult
        The answer, with source 'external'.

    Raises
    ------
    MalformedResponseError
        If the response is not valid.
    """

    try:
        data = json.loads(contents)
    except (ValueError, UnicodeDecodeError) as excp:
        raise MalformedResponseError("Answering service response is not valid JSON.") from excp

    if not isinstance(data, dict):
        raise MalformedResponseError("Answering service response is not a JSON object.")

    answer = data.get('answer')
    if not isinstance(answer, str) or not answer.strip():
        raise MalformedResponseError("Answering service response has no 'answer' field.")

    confidence = data.get('confidence', 1.0)
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)) \
        or not 0. <= confidence <= 1.:
        raise MalformedResponseError("Answering service confidence {} is not within "
                                     "[0, 1].".format(confidence))

    return AnswerResult(answer, float(confidence), 'external')
