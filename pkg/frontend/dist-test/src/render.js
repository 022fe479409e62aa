import { renderChart } from "./chart.js";
// Every number below is inserted with String(x) on the raw API value: the
// dashboard does zero metric math and no reformatting, so each rendered
// figure is traceable to exactly one response field.
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}
const num = (value) => escapeHtml(String(value));
export function renderTaskOptions(tasks, selected) {
    return tasks
        .map((t) => {
        const sel = t.id === selected ? " selected" : "";
        return `<option value="${escapeHtml(t.id)}"${sel}>${escapeHtml(t.id)} (${num(t.submission_count)} submissions)</option>`;
    })
        .join("");
}
export function renderReportCards(report) {
    const cards = [
        ["Demographic avg", num(report.demographic_avg)],
        ["Linguistic avg", num(report.linguistic_avg)],
        ["Gini", num(report.gini)],
        ["Population coverage", `${num(report.pop_coverage_pct)}%`],
        ["Covered languages", num(report.covered_language_count)],
    ];
    const html = cards
        .map(([label, value]) => `<div class="card"><div class="card-value">${value}</div><div class="card-label">${label}</div></div>`)
        .join("");
    return `<div class="cards">${html}</div>`;
}
export function renderLeaderboardTable(rows, report) {
    if (rows.length === 0) {
        return `<p class="empty-state">No submissions yet for <strong>${escapeHtml(report.task)}</strong>. Register a dataset and submit a score to put it on the board.</p>`;
    }
    const body = rows
        .map((row, i) => {
        const per = report.per_language[row.code];
        const utility = per ? num(per.utility) : "";
        const dataset = per ? escapeHtml(per.dataset) : "";
        return `<tr><td>${i + 1}</td><td>${escapeHtml(row.code)}</td><td>${num(row.best_value)}</td><td>${utility}</td><td>${escapeHtml(row.system)}</td><td>${dataset}</td></tr>`;
    })
        .join("");
    return `<table class="board"><thead><tr><th>#</th><th>Language</th><th>Best score</th><th>Utility</th><th>System</th><th>Dataset</th></tr></thead><tbody>${body}</tbody></table>`;
}
export function renderUnderservedTable(ranking) {
    if (ranking.entries.length === 0) {
        return `<p class="empty-state">No languages to rank.</p>`;
    }
    const body = ranking.entries
        .map((e, i) => `<tr><td>${i + 1}</td><td>${escapeHtml(e.code)}</td><td>${num(e.population)}</td><td>${num(e.utility)}</td><td>${num(e.score)}</td></tr>`)
        .join("");
    return `<table class="board" data-tau="${num(ranking.tau)}"><thead><tr><th>#</th><th>Language</th><th>Population</th><th>Utility</th><th>Score</th></tr></thead><tbody>${body}</tbody></table>`;
}
export function renderContributions(rows, kind) {
    if (rows.length === 0) {
        return `<p class="empty-state">No ${escapeHtml(kind)} credits yet.</p>`;
    }
    const body = rows
        .map((r, i) => `<tr><td>${i + 1}</td><td>${escapeHtml(r.beneficiary)}</td><td>${num(r.total)}</td><td>${num(r.events)}</td></tr>`)
        .join("");
    return `<table class="board"><thead><tr><th>#</th><th>${escapeHtml(kind)}</th><th>Credited gain</th><th>Events</th></tr></thead><tbody>${body}</tbody></table>`;
}
export function renderDiachronic(series, tau) {
    const label = tau === 1 ? "Demographic average over time" : "Linguistic average over time";
    return `<h3>${label}</h3>${renderChart(series, label)}`;
}
export function renderWhatIf(result) {
    if (result === null) {
        return `<p class="hint">Pick a language and a target utility to project its impact.</p>`;
    }
    const deltas = Object.entries(result.delta_m)
        .map(([tau, delta]) => `<li>&Delta;M at &tau;=${escapeHtml(tau)}: <strong>${num(delta)}</strong></li>`)
        .join("");
    const noChange = Object.values(result.delta_m).every((d) => d === 0);
    const headline = noChange
        ? `<p class="no-change">No change: <strong>${escapeHtml(result.language)}</strong> already meets utility ${num(result.utility)}.</p>`
        : `<p>If <strong>${escapeHtml(result.language)}</strong> reached utility ${num(result.utility)}:</p>`;
    const displaced = result.displaced_top3.length > 0
        ? result.displaced_top3.map(escapeHtml).join(", ")
        : "(none)";
    return `${headline}
<ul>${deltas}</ul>
<p>New under-served rank: <strong>${num(result.new_rank_of_language)}</strong></p>
<p>Displaced from top-3: ${displaced}</p>`;
}
export function renderErrorBanner(message, stale) {
    if (message === null)
        return "";
    const staleNote = stale ? " Showing previously loaded data, which may be stale." : "";
    return `<div class="banner error" role="alert">API error: ${escapeHtml(message)}.${staleNote}</div>`;
}
