"""
Documents emitted by the CLI and the web service, and their two renderings:
JSON (default) and aligned plain-text tables.
"""
import json

import pandas as pd

from .laurent import format_poly, format_series


def betti_numbers(poly):
    """[b_0, b_1, ..., b_top] read off a polynomial in t."""
    if poly.is_zero():
        return []
    top = max(exp[0] for exp, _ in poly.terms())
    return [str(poly.coefficient((degree,))) for degree in range(top + 1)]


def partitions_document(n, max_columns, partitions):
    return {
        'n': n,
        'maxColumns': max_columns,
        'count': len(partitions),
        'partitions': [p.format() for p in partitions],
    }


def partition_counts_document(counts):
    return {'n': len(counts) - 1, 'counts': [{'n': i, 'count': str(c)} for i, c in enumerate(counts)]}


def fixed_points_document(params, rows):
    """``rows`` are (FixedPoint, exponent, morse) triples."""
    return {
        'params': params.to_dict(),
        'boxBudget': str(params.box_budget),
        'count': len(rows),
        'fixedPoints': [
            {'parts': point.to_dict()['parts'], 'exponent': exponent, 'morseIndex': morse}
            for point, exponent, morse in rows
        ],
    }


def betti_document(params, method, poly, checked=False):
    return {
        'params': params.to_dict(),
        'method': 'all' if checked else method,
        'boxBudget': str(params.box_budget),
        'poincare': format_poly(poly),
        'betti': betti_numbers(poly),
        'poly': poly.to_json(),
    }


def character_document(first, second, character, morse=None):
    doc = {
        'A': first.to_dict(),
        'B': second.to_dict(),
        'character': format_poly(character.poly),
        'dimension': character.dimension(),
        'poly': character.to_json(),
    }
    if morse is not None:
        doc['morseIndex'] = morse
    return doc


def series_document(side, params, series):
    return {
        'side': side,
        'params': params,
        'series': format_series(series),
        'coeffs': series.to_json(),
    }


def to_json_text(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False)


def _flatten(record):
    flat = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for inner, item in value.items():
                flat[f"{key}.{inner}"] = item
        elif isinstance(value, list):
            flat[key] = ' | '.join(_cell(v) for v in value)
        else:
            flat[key] = value
    return flat


def _cell(value):
    if isinstance(value, dict):
        return ' '.join(f"{k}={v}" for k, v in value.items())
    return str(value)


def frame(records):
    return pd.DataFrame([_flatten(r) for r in records])


def to_text(doc):
    """
    Scalars first as a key/value table, then every list of records as its
    own table. Machine-oriented fields ('poly', 'coeffs') are left out.
    """
    scalars = []
    tables = []
    for key, value in doc.items():
        if key in ('poly', 'coeffs'):
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict):
            tables.append((key, frame(value)))
        elif isinstance(value, list):
            scalars.append({'field': key, 'value': ', '.join(str(v) for v in value)})
        elif isinstance(value, dict):
            scalars.extend({'field': f"{key}.{k}", 'value': _cell(v)} for k, v in value.items())
        else:
            scalars.append({'field': key, 'value': '' if value is None else str(value)})
    blocks = []
    if scalars:
        blocks.append(pd.DataFrame(scalars).to_string(index=False))
    for key, table in tables:
        blocks.append(f"{key}:\n{table.to_string(index=False)}")
    return '\n\n'.join(blocks)


def render(doc, fmt='json'):
    if fmt == 'text':
        return to_text(doc)
    return to_json_text(doc)
