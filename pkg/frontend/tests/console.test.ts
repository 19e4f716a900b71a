import { describe, expect, it } from 'vitest';
import type { LogEntry } from '../src/api';
import { describeEntry, renderLogCard } from '../src/console';
import { initialState, setupReady, toggleExpanded } from '../src/state';

function entry(overrides: Partial<LogEntry> = {}): LogEntry {
  return {
    seq: 1,
    op: { kind: 'prune', schema: 'RS1', scope: null },
    mode: 'any',
    before_count: 20,
    after_count: 18,
    result_count: 0,
    result_name: null,
    ...overrides,
  };
}

describe('describeEntry', () => {
  it('prunes read as a working-set transition', () => {
    expect(describeEntry(entry())).toBe('prune RS1: working 20 -> 18');
  });

  it('filters read as a named result with a size', () => {
    const e = entry({
      op: { kind: 'unexpected', schema: 'RS5', scope: 'condition' },
      before_count: 16,
      after_count: 16,
      result_count: 4,
      result_name: 'unexpected-3',
    });
    expect(describeEntry(e)).toBe('unexpected(condition) RS5: 4 rules -> unexpected-3');
  });
});

describe('renderLogCard', () => {
  it('shows the counts verbatim and tags the card with seq and operator', () => {
    const card = renderLogCard(entry(), null);
    expect(card.dataset.seq).toBe('1');
    expect(card.classList.contains('op-prune')).toBe(true);
    expect(card.querySelector('.log-counts')!.textContent).toBe('before 20 · after 18');
    expect(card.querySelector('button')).toBeNull(); // prunes have no result to open
  });

  it('filter cards expose an open-result button', () => {
    const opened: string[] = [];
    const card = renderLogCard(
      entry({
        op: { kind: 'conform', schema: 'RS3', scope: null },
        result_count: 2,
        result_name: 'conform-2',
      }),
      (name) => opened.push(name),
    );
    expect(card.querySelector('.log-counts')!.textContent).toBe(
      'before 20 · after 18 · output 2',
    );
    card.querySelector('button')!.click();
    expect(opened).toEqual(['conform-2']);
  });
});

describe('view state', () => {
  it('setup is ready only once dataset, ontology and rules all exist', () => {
    const s = initialState();
    expect(setupReady(s)).toBe(false);
    s.datasetId = 'd';
    s.ontologyId = 'o';
    expect(setupReady(s)).toBe(false);
    s.rulesetId = 'r';
    expect(setupReady(s)).toBe(true);
  });

  it('toggleExpanded flips per-path expansion', () => {
    const s = initialState();
    toggleExpanded(s, 'Attributes>District');
    expect(s.expandedConcepts.has('Attributes>District')).toBe(true);
    toggleExpanded(s, 'Attributes>District');
    expect(s.expandedConcepts.has('Attributes>District')).toBe(false);
  });
});
