import csv
import io
import json
import math

import pytest

from supermarket.cli.output import (
    OutputFormat,
    format_number,
    render,
    render_csv,
    render_json,
    render_text,
)
from supermarket.types import Provenance, ResultsDocument, ResultsTable


@pytest.fixture
def document() -> ResultsDocument:
    return ResultsDocument(
        command='fixed-point',
        parameters={'dist': 'T1', 'lambda': 1.0, 'd': 2},
        tables=[
            ResultsTable(
                name='fixed_point',
                columns=['k', 'pi_k e'],
                rows=[[1, 1.0 / 2.75], [2, 0.012345678901234]],
            )
        ],
        summary={'omega': [0.5625, 0.4375], 'half_width': math.inf},
        notes=['table capped before the tail threshold'],
        provenance=Provenance(version='1.0.0'),
    )


@pytest.mark.parametrize(
    ('value', 'expected'),
    [
        (1.0 / 3.0, '0.333333'),
        (2.5e-20, '2.5e-20'),
        (3, '3'),
        (True, 'True'),
        ('T1', 'T1'),
        (math.inf, 'inf'),
        ([0.5, 0.25], '(0.5, 0.25)'),
    ],
)
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_format_number_digits():
    assert format_number(math.pi, digits=3) == '3.14'


def test_text_rounds_and_lists_every_section(document):
    text = render_text(document)
    assert text.startswith('# fixed-point\n')
    assert '[fixed_point]' in text
    assert '0.363636' in text
    assert '0.0123457' in text
    assert '  omega: (0.5625, 0.4375)' in text
    assert 'note: table capped before the tail threshold' in text


def test_csv_keeps_full_precision(document):
    text = render_csv(document)
    sections = text.split('\n\n')
    assert sections[0].startswith('# fixed_point\n')
    rows = list(csv.reader(io.StringIO(sections[0].split('\n', 1)[1])))
    assert rows[0] == ['k', 'pi_k e']
    assert float(rows[1][1]) == 1.0 / 2.75
    assert float(rows[2][1]) == 0.012345678901234
    summary = list(csv.reader(io.StringIO(sections[1].split('\n', 1)[1])))
    assert summary[1] == ['omega', '0.5625;0.4375']
    assert summary[2] == ['half_width', 'inf']


def test_json_uses_constants_for_infinity(document):
    text = render_json(document)
    assert '"half_width": Infinity' in text
    loaded = json.loads(text)
    assert loaded['tables'][0]['rows'][0][1] == 1.0 / 2.75
    assert loaded['provenance'] == {
        'tool': 'supermarket-ph',
        'version': '1.0.0',
        'seed': None,
        'timestamp': None,
    }


def test_csv_and_json_carry_identical_numbers(document):
    csv_rows = list(csv.reader(io.StringIO(render_csv(document).split('\n\n')[0])))[2:]
    json_rows = json.loads(render_json(document))['tables'][0]['rows']
    assert [[int(k), float(v)] for k, v in csv_rows] == json_rows


def test_render_dispatches_on_format(document):
    assert render(document) == render_text(document)
    assert render(document, OutputFormat.CSV) == render_csv(document)
    assert render(document, OutputFormat.JSON) == render_json(document)


def test_summary_only_csv():
    document = ResultsDocument(
        command='sojourn',
        summary={'expected_sojourn': 2.5},
        provenance=Provenance(version='1.0.0'),
    )
    assert render_csv(document) == '# summary\nkey,value\nexpected_sojourn,2.5\n'
