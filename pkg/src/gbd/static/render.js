/** HTML fragments as pure functions of the state. */
import { currentPage, pageCount, } from "./state.js";
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}
/** Two-line marker: the query with a caret under the failing position. */
export function renderErrorPointer(query, position) {
    if (position === null) {
        return escapeHtml(query);
    }
    const offset = Math.min(Math.max(position, 0), query.length);
    return escapeHtml(query) + "\n" + " ".repeat(offset) + "^";
}
export function renderMessages(state) {
    const parts = [];
    if (state.error) {
        parts.push('<div class="error"><p>' +
            escapeHtml(state.error.message) +
            "</p><pre>" +
            renderErrorPointer(state.queryText, state.error.position) +
            "</pre></div>");
    }
    if (state.banner) {
        parts.push('<div class="banner">' + escapeHtml(state.banner) + "</div>");
    }
    return parts.join("");
}
export function renderColumnPicker(state) {
    const boxes = state.groups
        .map((group) => {
        const checked = state.selectedColumns.includes(group.name)
            ? " checked"
            : "";
        return ('<label><input type="checkbox" data-column="' +
            escapeHtml(group.name) +
            '"' +
            checked +
            "> " +
            escapeHtml(group.name) +
            "</label>");
    })
        .join("");
    return boxes
        ? '<span class="picker-title">columns:</span>' + boxes
        : "";
}
export function renderTable(state) {
    if (state.submittedQuery === null) {
        return '<p class="hint">Type a query and submit. An empty query lists everything.</p>';
    }
    if (state.rows.length === 0) {
        return '<p class="hint">No matches.</p>';
    }
    const head = state.columns
        .map((column) => "<th>" + escapeHtml(column) + "</th>")
        .join("");
    const body = currentPage(state)
        .map((row) => {
        const hash = row[0];
        const cells = row
            .map((value, index) => {
            if (index === 0) {
                return ('<td class="hash"><a href="#" data-download="' +
                    escapeHtml(hash) +
                    '" title="download">' +
                    escapeHtml(value) +
                    '</a> <a href="#" data-info="' +
                    escapeHtml(hash) +
                    '" title="attributes">info</a></td>');
            }
            return "<td>" + escapeHtml(value) + "</td>";
        })
            .join("");
        return '<tr data-hash="' + escapeHtml(hash) + '">' + cells + "</tr>";
    })
        .join("");
    return ("<table><thead><tr>" +
        head +
        "</tr></thead><tbody>" +
        body +
        "</tbody></table>");
}
export function renderPager(state) {
    if (state.submittedQuery === null || state.rows.length === 0) {
        return "";
    }
    const pages = pageCount(state);
    const prevOff = state.page === 0 ? " disabled" : "";
    const nextOff = state.page >= pages - 1 ? " disabled" : "";
    return ('<div class="pager">' +
        '<button data-page="prev"' +
        prevOff +
        ">&#8592;</button> " +
        `page ${state.page + 1} of ${pages} (${state.rows.length} rows) ` +
        '<button data-page="next"' +
        nextOff +
        ">&#8594;</button></div>");
}
export function renderInfo(state) {
    if (!state.info) {
        return "";
    }
    const rows = Object.entries(state.info.values)
        .map(([key, value]) => {
        const text = Array.isArray(value) ? value.join("\n") : value;
        return ("<tr><th>" +
            escapeHtml(key) +
            "</th><td><pre>" +
            escapeHtml(text) +
            "</pre></td></tr>");
    })
        .join("");
    return ('<div class="info"><h2>' +
        escapeHtml(state.info.hash) +
        '</h2><table>' +
        rows +
        '</table><button data-close-info="1">close</button></div>');
}
