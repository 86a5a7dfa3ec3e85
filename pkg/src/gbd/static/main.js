/** Wires the pure state/render modules to the document. */
import { Api, isAbort, QueryRejected, SingleFlight } from "./api.js";
import { renderColumnPicker, renderInfo, renderMessages, renderPager, renderTable, } from "./render.js";
import { initialState, toggleColumn, withBanner, withBusy, withGroups, withInfo, withPage, withQueryError, withQueryText, withResult, } from "./state.js";
const api = new Api("");
const flight = new SingleFlight();
let state = initialState();
const queryInput = document.getElementById("query");
const submitButton = document.getElementById("submit");
const columnsBox = document.getElementById("columns");
const messagesBox = document.getElementById("messages");
const resultsBox = document.getElementById("results");
const infoBox = document.getElementById("infopanel");
function redraw() {
    columnsBox.innerHTML = renderColumnPicker(state);
    messagesBox.innerHTML = renderMessages(state);
    resultsBox.innerHTML = renderTable(state) + renderPager(state);
    infoBox.innerHTML = renderInfo(state);
    submitButton.disabled = state.busy;
}
async function submit() {
    state = withBusy(withQueryText(state, queryInput.value), true);
    redraw();
    const query = state.queryText;
    const columns = [...state.selectedColumns];
    try {
        const result = await flight.run((signal) => api.query(query, columns, signal));
        state = withResult(state, query, result);
    }
    catch (error) {
        if (isAbort(error)) {
            return; // a newer submission took over
        }
        state =
            error instanceof QueryRejected
                ? withQueryError(state, error.message, error.position)
                : withBanner(state, String(error));
    }
    redraw();
}
async function download(hash) {
    try {
        const file = await api.fileContent(hash);
        const url = URL.createObjectURL(new Blob([file.bytes]));
        const anchor = document.createElement("a");
        anchor.href = url;
        anchor.download = file.filename ?? hash + ".cnf";
        anchor.click();
        URL.revokeObjectURL(url);
    }
    catch (error) {
        state = withBanner(state, String(error));
        redraw();
    }
}
async function showInfo(hash) {
    try {
        const values = await api.info(hash);
        state = withInfo(state, { hash, values });
    }
    catch (error) {
        state = withBanner(state, String(error));
    }
    redraw();
}
document.getElementById("queryform").addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
});
columnsBox.addEventListener("change", (event) => {
    const target = event.target;
    const column = target.dataset.column;
    if (column) {
        state = toggleColumn(state, column);
        redraw();
    }
});
resultsBox.addEventListener("click", (event) => {
    const target = event.target.closest("a, button");
    if (!(target instanceof HTMLElement)) {
        return;
    }
    if (target.dataset.download) {
        event.preventDefault();
        void download(target.dataset.download);
    }
    else if (target.dataset.info) {
        event.preventDefault();
        void showInfo(target.dataset.info);
    }
    else if (target.dataset.page) {
        state = withPage(state, target.dataset.page === "next" ? state.page + 1 : state.page - 1);
        redraw();
    }
});
infoBox.addEventListener("click", (event) => {
    const target = event.target;
    if (target.dataset.closeInfo) {
        state = withInfo(state, null);
        redraw();
    }
});
api
    .groups()
    .then((groups) => {
    state = withGroups(state, groups);
    redraw();
})
    .catch((error) => {
    state = withBanner(state, String(error));
    redraw();
});
redraw();
