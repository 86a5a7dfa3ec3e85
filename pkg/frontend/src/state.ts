/** Console state and its pure transitions.
 *
 * Every function returns a fresh state; rendering is a function of the
 * state alone, so each transition is directly testable.
 */

import type { GroupInfo, InstanceInfo, QueryResult } from "./api.js";

export interface QueryError {
  message: string;
  position: number | null;
}

export interface UiState {
  groups: GroupInfo[];
  queryText: string;
  selectedColumns: string[];
  /** Query whose rows are currently displayed, null before the first result. */
  submittedQuery: string | null;
  columns: string[];
  rows: string[][];
  page: number;
  pageSize: number;
  error: QueryError | null;
  banner: string | null;
  info: { hash: string; values: InstanceInfo } | null;
  busy: boolean;
}

export function initialState(pageSize = 50): UiState {
  return {
    groups: [],
    queryText: "",
    selectedColumns: [],
    submittedQuery: null,
    columns: ["hash"],
    rows: [],
    page: 0,
    pageSize,
    error: null,
    banner: null,
    info: null,
    busy: false,
  };
}

/** Install the catalog; selected columns stay a subset of it. */
export function withGroups(state: UiState, groups: GroupInfo[]): UiState {
  const known = new Set(groups.map((g) => g.name));
  return {
    ...state,
    groups,
    selectedColumns: state.selectedColumns.filter((name) => known.has(name)),
  };
}

export function withQueryText(state: UiState, text: string): UiState {
  // editing invalidates a stale inline error marker
  return { ...state, queryText: text, error: null };
}

export function toggleColumn(state: UiState, name: string): UiState {
  if (!state.groups.some((g) => g.name === name)) {
    return state;
  }
  const selected = state.selectedColumns.includes(name)
    ? state.selectedColumns.filter((c) => c !== name)
    : [...state.selectedColumns, name];
  return { ...state, selectedColumns: selected };
}

export function withResult(
  state: UiState,
  query: string,
  result: QueryResult,
): UiState {
  return {
    ...state,
    submittedQuery: query,
    columns: result.columns,
    rows: result.rows,
    page: 0,
    error: null,
    banner: null,
    busy: false,
  };
}

/** A rejected query keeps the previous rows on screen. */
export function withQueryError(
  state: UiState,
  message: string,
  position: number | null,
): UiState {
  return { ...state, error: { message, position }, banner: null, busy: false };
}

/** Network or download trouble; rows are retained. */
export function withBanner(state: UiState, message: string): UiState {
  return { ...state, banner: message, busy: false };
}

export function clearBanner(state: UiState): UiState {
  return { ...state, banner: null };
}

export function withBusy(state: UiState, busy: boolean): UiState {
  return { ...state, busy };
}

export function withInfo(
  state: UiState,
  info: { hash: string; values: InstanceInfo } | null,
): UiState {
  return { ...state, info };
}

export function pageCount(state: UiState): number {
  return Math.max(1, Math.ceil(state.rows.length / state.pageSize));
}

export function withPage(state: UiState, page: number): UiState {
  const clamped = Math.min(Math.max(page, 0), pageCount(state) - 1);
  return { ...state, page: clamped };
}

export function currentPage(state: UiState): string[][] {
  const start = state.page * state.pageSize;
  return state.rows.slice(start, start + state.pageSize);
}
