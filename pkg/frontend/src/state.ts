// Client view state. Counts never live here: they are read from server
// responses at render time.

import type { PagerState } from './table';

export interface ViewState {
  datasetId: string | null;
  ontologyId: string | null;
  rulesetId: string | null;
  sessionId: string | null;
  expandedConcepts: Set<string>;
  selectedConcept: string | null;
  schemaEditorText: string;
  schemaNames: string[];
  openResult: { name: string; id: string } | null;
  resultPager: PagerState;
  workingPager: PagerState;
}

export function initialState(): ViewState {
  return {
    datasetId: null,
    ontologyId: null,
    rulesetId: null,
    sessionId: null,
    expandedConcepts: new Set(),
    selectedConcept: null,
    schemaEditorText: '',
    schemaNames: [],
    openResult: null,
    resultPager: { offset: 0, limit: 50, sort: 'confidence' },
    workingPager: { offset: 0, limit: 50, sort: 'canonical' },
  };
}

export function toggleExpanded(state: ViewState, path: string): void {
  if (state.expandedConcepts.has(path)) {
    state.expandedConcepts.delete(path);
  } else {
    state.expandedConcepts.add(path);
  }
}

export function sessionReady(state: ViewState): boolean {
  return state.sessionId !== null;
}

export function setupReady(state: ViewState): boolean {
  return state.datasetId !== null && state.ontologyId !== null && state.rulesetId !== null;
}
