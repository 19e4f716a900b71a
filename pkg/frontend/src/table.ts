// Sortable, paged rule table. Sorting and pagination are delegated to the
// server so displayed order always matches exported reports; this module
// only renders the page it was given.

import type { RulePage, RuleRow } from './api';

export const RULE_COLUMNS = ['Antecedent', 'Consequent', 'Confidence', 'Support'] as const;

export function formatMetric(value: number): string {
  return value.toFixed(3);
}

export function ruleCells(row: RuleRow): string[] {
  return [
    row.antecedent,
    row.consequent,
    formatMetric(row.confidence),
    formatMetric(row.support),
  ];
}

export interface PagerState {
  offset: number;
  limit: number;
  sort: string;
}

export function pageInfo(page: RulePage): string {
  if (page.total === 0) return 'no rules';
  const from = page.offset + 1;
  const to = Math.min(page.offset + page.limit, page.total);
  return `${from}-${to} of ${page.total}`;
}

export function renderRuleTable(
  page: RulePage,
  onPage: (offset: number) => void,
  onSort: (sort: string) => void,
): HTMLElement {
  const wrap = document.createElement('div');
  wrap.className = 'rule-table';

  const table = document.createElement('table');
  const thead = document.createElement('thead');
  const headRow = document.createElement('tr');
  for (const col of RULE_COLUMNS) {
    const th = document.createElement('th');
    th.textContent = col;
    if (col === 'Confidence') {
      th.classList.add('sortable');
      th.addEventListener('click', () =>
        onSort(page.sort === 'confidence' ? 'canonical' : 'confidence'),
      );
    }
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement('tbody');
  for (const row of page.rules) {
    const tr = document.createElement('tr');
    for (const cell of ruleCells(row)) {
      const td = document.createElement('td');
      td.textContent = cell;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  wrap.appendChild(table);

  const pager = document.createElement('div');
  pager.className = 'pager';
  const prev = document.createElement('button');
  prev.textContent = '<';
  prev.disabled = page.offset === 0;
  prev.addEventListener('click', () => onPage(Math.max(0, page.offset - page.limit)));
  const next = document.createElement('button');
  next.textContent = '>';
  next.disabled = page.offset + page.limit >= page.total;
  next.addEventListener('click', () => onPage(page.offset + page.limit));
  const info = document.createElement('span');
  info.textContent = pageInfo(page);
  pager.append(prev, info, next);
  wrap.appendChild(pager);

  return wrap;
}
