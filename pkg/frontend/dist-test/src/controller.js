import { clampTau, DEFAULT_LIMIT, DEFAULT_TAU } from "./state.js";
function emptyViewModel() {
    return {
        tasks: [],
        report: null,
        languages: [],
        underserved: null,
        seriesDemographic: [],
        seriesLinguistic: [],
        contributions: [],
        contributionKind: "dataset",
        whatif: null,
        error: null,
        hasStaleData: false,
    };
}
// Controller: owns the view state and model, talks to the API, and notifies
// the shell after every change. Panels keep at most one request in flight;
// slider spam coalesces to the latest value; responses for a superseded task
// are dropped.
export class Dashboard {
    constructor(api, onChange = () => { }) {
        this.api = api;
        this.onChange = onChange;
        this.vm = emptyViewModel();
        this.state = { task: null, tau: DEFAULT_TAU, limit: DEFAULT_LIMIT };
        this.loadSeq = 0;
        this.pendingTau = null;
        this.underservedInFlight = false;
        this.whatifInFlight = false;
    }
    notify() {
        this.onChange(this.vm, this.state);
    }
    fail(err) {
        this.vm.error = err instanceof Error ? err.message : String(err);
        this.vm.hasStaleData = this.vm.report !== null;
        this.notify();
    }
    async start(initial) {
        this.state.tau = clampTau(initial.tau);
        this.state.limit = initial.limit;
        try {
            this.vm.tasks = await this.api.tasks();
        }
        catch (err) {
            this.fail(err);
            return;
        }
        const task = initial.task ?? (this.vm.tasks.length > 0 ? this.vm.tasks[0].id : null);
        if (task !== null) {
            await this.selectTask(task);
        }
        else {
            this.notify();
        }
    }
    async selectTask(taskId) {
        this.state.task = taskId;
        this.vm.whatif = null;
        const seq = ++this.loadSeq;
        try {
            const [report, languages, underserved, demographic, linguistic, contributions] = await Promise.all([
                this.api.report(taskId),
                this.api.languages(taskId),
                this.api.underserved(taskId, this.state.tau, this.state.limit),
                this.api.diachronic(taskId, 1),
                this.api.diachronic(taskId, 0),
                this.api.contributions(taskId, this.vm.contributionKind, DEFAULT_TAU),
            ]);
            if (seq !== this.loadSeq)
                return; // superseded by a newer selection
            this.vm.report = report;
            this.vm.languages = languages;
            this.vm.underserved = underserved;
            this.vm.seriesDemographic = demographic;
            this.vm.seriesLinguistic = linguistic;
            this.vm.contributions = contributions;
            this.vm.error = null;
            this.vm.hasStaleData = false;
            this.notify();
        }
        catch (err) {
            if (seq !== this.loadSeq)
                return;
            this.fail(err);
        }
    }
    // Slider changes funnel through a single-slot queue: one request in flight,
    // one latest-pending value; intermediate values are skipped entirely.
    setTau(tau) {
        this.state.tau = clampTau(tau);
        this.pendingTau = this.state.tau;
        this.notify();
        return this.pumpUnderserved();
    }
    setLimit(limit) {
        this.state.limit = limit;
        this.pendingTau = this.state.tau;
        return this.pumpUnderserved();
    }
    async pumpUnderserved() {
        if (this.underservedInFlight || this.pendingTau === null || this.state.task === null) {
            return;
        }
        const tau = this.pendingTau;
        this.pendingTau = null;
        this.underservedInFlight = true;
        try {
            const ranking = await this.api.underserved(this.state.task, tau, this.state.limit);
            this.vm.underserved = ranking;
            this.vm.error = null;
            this.notify();
        }
        catch (err) {
            this.fail(err);
        }
        finally {
            this.underservedInFlight = false;
        }
        if (this.pendingTau !== null) {
            await this.pumpUnderserved();
        }
    }
    async submitWhatIf(language, utility) {
        if (this.state.task === null || this.whatifInFlight)
            return;
        this.whatifInFlight = true;
        try {
            this.vm.whatif = await this.api.whatif(this.state.task, language, utility);
            this.vm.error = null;
            this.notify();
        }
        catch (err) {
            this.fail(err);
        }
        finally {
            this.whatifInFlight = false;
        }
    }
    async setContributionKind(kind) {
        this.vm.contributionKind = kind;
        if (this.state.task === null)
            return;
        try {
            this.vm.contributions = await this.api.contributions(this.state.task, kind, DEFAULT_TAU);
            this.notify();
        }
        catch (err) {
            this.fail(err);
        }
    }
}
