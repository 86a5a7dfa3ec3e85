/** Console state and its pure transitions.
 *
 * Every function returns a fresh state; rendering is a function of the
 * state alone, so each transition is directly testable.
 */
export function initialState(pageSize = 50) {
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
export function withGroups(state, groups) {
    const known = new Set(groups.map((g) => g.name));
    return {
        ...state,
        groups,
        selectedColumns: state.selectedColumns.filter((name) => known.has(name)),
    };
}
export function withQueryText(state, text) {
    // editing invalidates a stale inline error marker
    return { ...state, queryText: text, error: null };
}
export function toggleColumn(state, name) {
    if (!state.groups.some((g) => g.name === name)) {
        return state;
    }
    const selected = state.selectedColumns.includes(name)
        ? state.selectedColumns.filter((c) => c !== name)
        : [...state.selectedColumns, name];
    return { ...state, selectedColumns: selected };
}
export function withResult(state, query, result) {
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
export function withQueryError(state, message, position) {
    return { ...state, error: { message, position }, banner: null, busy: false };
}
/** Network or download trouble; rows are retained. */
export function withBanner(state, message) {
    return { ...state, banner: message, busy: false };
}
export function clearBanner(state) {
    return { ...state, banner: null };
}
export function withBusy(state, busy) {
    return { ...state, busy };
}
export function withInfo(state, info) {
    return { ...state, info };
}
export function pageCount(state) {
    return Math.max(1, Math.ceil(state.rows.length / state.pageSize));
}
export function withPage(state, page) {
    const clamped = Math.min(Math.max(page, 0), pageCount(state) - 1);
    return { ...state, page: clamped };
}
export function currentPage(state) {
    const start = state.page * state.pageSize;
    return state.rows.slice(start, start + state.pageSize);
}
