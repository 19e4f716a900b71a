// Operator console: one card per log entry, with before/after counts taken
// verbatim from the server's log. Result sets open in paged rule tables.

import type { LogEntry, RulePage } from './api';
import { operatorLabel, type OperatorKind } from './schema';
import { renderRuleTable } from './table';

export function describeEntry(entry: LogEntry): string {
  const op = operatorLabel(entry.op.kind as OperatorKind, entry.op.scope ?? undefined);
  if (entry.op.kind === 'prune') {
    return `${op} ${entry.op.schema}: working ${entry.before_count} -> ${entry.after_count}`;
  }
  return `${op} ${entry.op.schema}: ${entry.result_count} rules -> ${entry.result_name}`;
}

export function renderLogCard(
  entry: LogEntry,
  onOpenResult: ((name: string) => void) | null,
): HTMLElement {
  const card = document.createElement('div');
  card.className = `log-card op-${entry.op.kind}`;
  card.dataset.seq = String(entry.seq);

  const title = document.createElement('div');
  title.className = 'log-title';
  title.textContent = `#${entry.seq} ${describeEntry(entry)}`;
  card.appendChild(title);

  const counts = document.createElement('div');
  counts.className = 'log-counts';
  counts.textContent =
    `before ${entry.before_count} · after ${entry.after_count}` +
    (entry.op.kind === 'prune' ? '' : ` · output ${entry.result_count}`);
  card.appendChild(counts);

  if (entry.result_name && onOpenResult) {
    const open = document.createElement('button');
    open.textContent = `open ${entry.result_name}`;
    open.addEventListener('click', () => onOpenResult(entry.result_name!));
    card.appendChild(open);
  }
  return card;
}

export function renderResultPanel(
  title: string,
  page: RulePage,
  onPage: (offset: number) => void,
  onSort: (sort: string) => void,
): HTMLElement {
  const panel = document.createElement('section');
  panel.className = 'result-panel';
  const heading = document.createElement('h3');
  heading.textContent = title;
  panel.appendChild(heading);
  panel.appendChild(renderRuleTable(page, onPage, onSort));
  return panel;
}
