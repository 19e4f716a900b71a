import { describe, expect, it } from 'vitest';
import {
  emitSchemaLine,
  operatorLabel,
  parseSchemaLine,
  type SchemaForm,
} from '../src/schema';

describe('emitSchemaLine', () => {
  it('renders an implicative schema with the arrow', () => {
    const line = emitSchemaLine({
      name: 'RS3',
      antecedent: [{ concept: 'UnsatPrice', negated: false }],
      consequent: [{ concept: 'UnsatCalmDistrict', negated: true }],
    });
    expect(line).toBe('schema RS3: <UnsatPrice -> !UnsatCalmDistrict>');
  });

  it('renders a non-implicative schema without the arrow', () => {
    const line = emitSchemaLine({
      name: 'RS1',
      antecedent: [
        { concept: 'SatisfactionDistrict', negated: false },
        { concept: 'Price', negated: false },
      ],
      consequent: [],
    });
    expect(line).toBe('schema RS1: <SatisfactionDistrict, Price>');
  });

  it('refuses an empty condition side', () => {
    expect(() =>
      emitSchemaLine({ name: 'X', antecedent: [], consequent: [] }),
    ).toThrow(/condition/);
  });
});

describe('parseSchemaLine', () => {
  const forms: SchemaForm[] = [
    {
      name: 'A',
      antecedent: [{ concept: 'SatAccess', negated: false }],
      consequent: [{ concept: 'SatDelais', negated: false }],
    },
    {
      name: 'B',
      antecedent: [
        { concept: 'District', negated: true },
        { concept: 'Topic', negated: false },
      ],
      consequent: [],
    },
    {
      name: 'C',
      antecedent: [{ concept: 'X1', negated: false }],
      consequent: [
        { concept: 'Y1', negated: true },
        { concept: 'Y2', negated: false },
      ],
    },
  ];

  it('is the inverse of emitSchemaLine', () => {
    for (const form of forms) {
      expect(parseSchemaLine(emitSchemaLine(form))).toEqual(form);
    }
  });

  it('rejects text that is not a schema line', () => {
    expect(() => parseSchemaLine('apply prune RS1')).toThrow(/not a schema line/);
  });
});

describe('operatorLabel', () => {
  it('shows the scope only for the unexpectedness filter', () => {
    expect(operatorLabel('prune')).toBe('prune');
    expect(operatorLabel('unexpected', 'conclusion')).toBe('unexpected(conclusion)');
    expect(operatorLabel('unexpected')).toBe('unexpected(condition)');
  });
});
