import { ApiClient } from "./api.js";
import { clampTau, DEFAULT_LIMIT, DEFAULT_TAU, type ViewState } from "./state.js";
import type {
  ContributionRow,
  DiachronicPoint,
  LanguageScore,
  TaskReport,
  TaskSummary,
  UnderservedRanking,
  WhatIfResult,
} from "./types.js";

export interface ViewModel {
  tasks: TaskSummary[];
  report: TaskReport | null;
  languages: LanguageScore[];
  underserved: UnderservedRanking | null;
  seriesDemographic: DiachronicPoint[];
  seriesLinguistic: DiachronicPoint[];
  contributions: ContributionRow[];
  contributionKind: "system" | "dataset";
  whatif: WhatIfResult | null;
  error: string | null;
  hasStaleData: boolean;
}

function emptyViewModel(): ViewModel {
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
  readonly vm: ViewModel = emptyViewModel();
  readonly state: ViewState = { task: null, tau: DEFAULT_TAU, limit: DEFAULT_LIMIT };

  private loadSeq = 0;
  private pendingTau: number | null = null;
  private underservedInFlight = false;
  private whatifInFlight = false;

  constructor(
    private api: ApiClient,
    private onChange: (vm: ViewModel, state: ViewState) => void = () => {},
  ) {}

  private notify(): void {
    this.onChange(this.vm, this.state);
  }

  private fail(err: unknown): void {
    this.vm.error = err instanceof Error ? err.message : String(err);
    this.vm.hasStaleData = this.vm.report !== null;
    this.notify();
  }

  async start(initial: ViewState): Promise<void> {
    this.state.tau = clampTau(initial.tau);
    this.state.limit = initial.limit;
    try {
      this.vm.tasks = await this.api.tasks();
    } catch (err) {
      this.fail(err);
      return;
    }
    const task = initial.task ?? (this.vm.tasks.length > 0 ? this.vm.tasks[0].id : null);
    if (task !== null) {
      await this.selectTask(task);
    } else {
      this.notify();
    }
  }

  async selectTask(taskId: string): Promise<void> {
    this.state.task = taskId;
    this.vm.whatif = null;
    const seq = ++this.loadSeq;
    try {
      const [report, languages, underserved, demographic, linguistic, contributions] =
        await Promise.all([
          this.api.report(taskId),
          this.api.languages(taskId),
          this.api.underserved(taskId, this.state.tau, this.state.limit),
          this.api.diachronic(taskId, 1),
          this.api.diachronic(taskId, 0),
          this.api.contributions(taskId, this.vm.contributionKind, DEFAULT_TAU),
        ]);
      if (seq !== this.loadSeq) return; // superseded by a newer selection
      this.vm.report = report;
      this.vm.languages = languages;
      this.vm.underserved = underserved;
      this.vm.seriesDemographic = demographic;
      this.vm.seriesLinguistic = linguistic;
      this.vm.contributions = contributions;
      this.vm.error = null;
      this.vm.hasStaleData = false;
      this.notify();
    } catch (err) {
      if (seq !== this.loadSeq) return;
      this.fail(err);
    }
  }

  // Slider changes funnel through a single-slot queue: one request in flight,
  // one latest-pending value; intermediate values are skipped entirely.
  setTau(tau: number): Promise<void> {
    this.state.tau = clampTau(tau);
    this.pendingTau = this.state.tau;
    this.notify();
    return this.pumpUnderserved();
  }

  setLimit(limit: number): Promise<void> {
    this.state.limit = limit;
    this.pendingTau = this.state.tau;
    return this.pumpUnderserved();
  }

  private async pumpUnderserved(): Promise<void> {
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
    } catch (err) {
      this.fail(err);
    } finally {
      this.underservedInFlight = false;
    }
    if (this.pendingTau !== null) {
      await this.pumpUnderserved();
    }
  }

  async submitWhatIf(language: string, utility: number): Promise<void> {
    if (this.state.task === null || this.whatifInFlight) return;
    this.whatifInFlight = true;
    try {
      this.vm.whatif = await this.api.whatif(this.state.task, language, utility);
      this.vm.error = null;
      this.notify();
    } catch (err) {
      this.fail(err);
    } finally {
      this.whatifInFlight = false;
    }
  }

  async setContributionKind(kind: "system" | "dataset"): Promise<void> {
    this.vm.contributionKind = kind;
    if (this.state.task === null) return;
    try {
      this.vm.contributions = await this.api.contributions(this.state.task, kind, DEFAULT_TAU);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }
}
