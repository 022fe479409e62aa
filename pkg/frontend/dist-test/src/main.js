import { ApiClient } from "./api.js";
import { Dashboard } from "./controller.js";
import { renderContributions, renderDiachronic, renderErrorBanner, renderLeaderboardTable, renderReportCards, renderTaskOptions, renderUnderservedTable, renderWhatIf, } from "./render.js";
import { decodeViewState, encodeViewState } from "./state.js";
function byId(id) {
    const el = document.getElementById(id);
    if (!el)
        throw new Error(`missing element #${id}`);
    return el;
}
function syncUrl(state) {
    const query = encodeViewState(state);
    const url = `${location.pathname}?${query}`;
    if (`${location.pathname}${location.search}` !== url) {
        history.replaceState(null, "", url);
    }
}
function applyViewModel(vm, state) {
    byId("banner").innerHTML = renderErrorBanner(vm.error, vm.hasStaleData);
    byId("task-select").innerHTML = renderTaskOptions(vm.tasks, state.task);
    byId("tau-value").textContent = String(state.tau);
    if (vm.report) {
        byId("cards").innerHTML = renderReportCards(vm.report);
        byId("leaderboard").innerHTML = renderLeaderboardTable(vm.languages, vm.report);
        byId("chart-demo").innerHTML = renderDiachronic(vm.seriesDemographic, 1);
        byId("chart-ling").innerHTML = renderDiachronic(vm.seriesLinguistic, 0);
    }
    if (vm.underserved) {
        byId("underserved").innerHTML = renderUnderservedTable(vm.underserved);
    }
    byId("contributions").innerHTML = renderContributions(vm.contributions, vm.contributionKind);
    byId("whatif-result").innerHTML = renderWhatIf(vm.whatif);
    syncUrl(state);
}
async function boot() {
    const api = new ApiClient("");
    const dash = new Dashboard(api, applyViewModel);
    const initial = decodeViewState(location.search);
    const taskSelect = byId("task-select");
    taskSelect.addEventListener("change", () => {
        void dash.selectTask(taskSelect.value);
    });
    const tauSlider = byId("tau-slider");
    tauSlider.addEventListener("input", () => {
        void dash.setTau(Number(tauSlider.value));
    });
    const limitInput = byId("limit-input");
    limitInput.addEventListener("change", () => {
        const limit = Number(limitInput.value);
        if (Number.isInteger(limit) && limit > 0)
            void dash.setLimit(limit);
    });
    const kindSelect = byId("kind-select");
    kindSelect.addEventListener("change", () => {
        void dash.setContributionKind(kindSelect.value);
    });
    const whatifForm = byId("whatif-form");
    whatifForm.addEventListener("submit", (ev) => {
        ev.preventDefault();
        const language = byId("whatif-language").value.trim().toLowerCase();
        const utility = Number(byId("whatif-utility").value);
        if (language && utility >= 0 && utility <= 1) {
            void dash.submitWhatIf(language, utility);
        }
    });
    tauSlider.value = String(initial.tau);
    limitInput.value = String(initial.limit);
    await dash.start(initial);
}
void boot();
