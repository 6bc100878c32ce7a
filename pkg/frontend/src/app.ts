/** Application controller: owns server data, the selection store and the
 * three view panes (abundance small multiples, tissue panels, heatmap +
 * detail query). Views re-render as pure functions of (server data,
 * SelectionState); cross-view linking happens only through the store.
 */

import { ApiClient } from "./api.js";
import { typeColors } from "./colors.js";
import { renderHeatmap } from "./heatmap.js";
import { applyExtension, renderQueryBuilder } from "./querybuilder.js";
import { renderRaincloud } from "./raincloud.js";
import { searchOrder } from "./search.js";
import { SelectionStore } from "./state.js";
import { renderTissueView } from "./tissue.js";
import type {
  DistributionResponse,
  GeometryResponse,
  HeatmapResponse,
  Metric,
  Mode,
  ProjectResponse,
  QueryResponse,
  QueryWire,
  RankResponse,
  RemainingEntryWire,
  SubjectWire,
} from "./types.js";

type DragPayload =
  | { kind: "extension"; entry: RemainingEntryWire }
  | { kind: "combine"; label: string };

export class App {
  readonly store = new SelectionStore();
  project: ProjectResponse | null = null;
  metric: Metric = "silhouette";
  mode: Mode = "relative";
  heatmapVariant: "difference" | "metric" = "difference";
  searchText = "";
  combinedTypes: string[] = [];

  queryState: { query: QueryWire; response: QueryResponse } | null = null;
  heatmapData: HeatmapResponse | null = null;
  rankData: RankResponse | null = null;

  private distCache = new Map<string, DistributionResponse>();
  private combinedDist: DistributionResponse | null = null;
  private geometryCache = new Map<string, GeometryResponse>();
  private tissueData: GeometryResponse[] = [];
  private dragged: DragPayload | null = null;
  private tracked = new Set<Promise<unknown>>();

  private abundanceControls!: HTMLElement;
  private combinePane!: HTMLElement;
  private plotListPane!: HTMLElement;
  private tissuePane!: HTMLElement;
  private microenvPane!: HTMLElement;

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.buildSkeleton();
    this.store.subscribe(() => {
      this.renderAbundance();
      this.renderMicroenv();
      this.track(this.refreshTissue());
    });
  }

  /** Awaits every in-flight request issued so far (including follow-ups). */
  async idle(): Promise<void> {
    while (this.tracked.size > 0) {
      await Promise.allSettled([...this.tracked]);
    }
  }

  track<T>(promise: Promise<T>): Promise<T> {
    this.tracked.add(promise);
    promise
      .finally(() => this.tracked.delete(promise))
      .catch((err) => console.error("request failed:", err));
    return promise;
  }

  async init(): Promise<void> {
    this.project = await this.api.project();
    await Promise.all([this.refreshRank(), this.refreshHeatmap(), this.refreshDistributions()]);
    await this.refreshTissue();
    this.renderAbundance();
    this.renderMicroenv();
  }

  get catalog(): string[] {
    return this.project?.summary.types ?? [];
  }

  private get allSamples(): string[] {
    if (!this.project) return [];
    return [
      ...this.project.summary.cohorts.A.samples,
      ...this.project.summary.cohorts.B.samples,
    ];
  }

  // ------------------------------------------------------------------ data

  private distKey(subject: SubjectWire): string {
    return `${this.project?.revision ?? 0}:${this.mode}:${JSON.stringify(subject)}`;
  }

  private async refreshDistributions(): Promise<void> {
    this.distCache.clear();
    await Promise.all(
      this.catalog.map(async (label) => {
        const dist = await this.api.distributions([label], this.mode);
        this.distCache.set(this.distKey([label]), dist);
      }),
    );
    if (this.combinedTypes.length > 0) {
      this.combinedDist = await this.api.distributions(this.combinedTypes, this.mode);
    }
  }

  private async refreshRank(): Promise<void> {
    this.rankData = await this.api.rank(this.metric, this.mode);
  }

  private async refreshHeatmap(): Promise<void> {
    this.heatmapData = await this.api.heatmap(
      this.heatmapVariant,
      this.heatmapVariant === "metric" ? this.metric : undefined,
    );
  }

  private async refreshTissue(): Promise<void> {
    const selection = this.store.get();
    const visible = selection.selectedSamples.size
      ? this.allSamples.filter((sid) => selection.selectedSamples.has(sid))
      : this.allSamples;
    const subject = selection.activeSubject ?? undefined;
    const geometries = await Promise.all(
      visible.map((sid) => {
        const key = `${this.project?.revision ?? 0}:${sid}:${JSON.stringify(subject ?? null)}`;
        const cached = this.geometryCache.get(key);
        if (cached) return Promise.resolve(cached);
        return this.api.geometry(sid, subject).then((geometry) => {
          this.geometryCache.set(key, geometry);
          return geometry;
        });
      }),
    );
    this.tissueData = geometries;
    this.renderTissue();
  }

  async openQuery(query: QueryWire): Promise<void> {
    const response = await this.api.query(query, this.mode, this.metric);
    this.queryState = { query, response };
    this.store.update({ activeSubject: query });
  }

  private async applyQueryDrop(): Promise<void> {
    if (this.dragged?.kind !== "extension" || !this.queryState) return;
    const next = applyExtension(this.queryState.query, this.dragged.entry.extension);
    this.dragged = null;
    await this.openQuery(next);
  }

  private async applyCombineDrop(): Promise<void> {
    if (this.dragged?.kind !== "combine") return;
    const label = this.dragged.label;
    this.dragged = null;
    if (this.combinedTypes.includes(label)) return; // duplicate drop: no-op
    this.combinedTypes = [...this.combinedTypes, label];
    this.combinedDist = await this.api.distributions(this.combinedTypes, this.mode);
    this.renderAbundance();
  }

  async setMetric(metric: Metric): Promise<void> {
    this.metric = metric;
    const jobs = [this.refreshRank()];
    if (this.heatmapVariant === "metric") jobs.push(this.refreshHeatmap());
    if (this.queryState) jobs.push(this.openQuery(this.queryState.query));
    await Promise.all(jobs);
    this.renderAbundance();
    this.renderMicroenv();
  }

  async setMode(mode: Mode): Promise<void> {
    this.mode = mode;
    const jobs = [this.refreshRank(), this.refreshDistributions()];
    if (this.queryState) jobs.push(this.openQuery(this.queryState.query));
    await Promise.all(jobs);
    this.renderAbundance();
    this.renderMicroenv();
  }

  async setHeatmapVariant(variant: "difference" | "metric"): Promise<void> {
    this.heatmapVariant = variant;
    await this.refreshHeatmap();
    this.renderMicroenv();
  }

  setSearch(text: string): void {
    this.searchText = text;
    this.renderAbundance();
  }

  setFade(cohort: "A" | "B" | null): void {
    this.store.update({ fadedCohort: cohort });
  }

  selectTick(sampleId: string, subject: SubjectWire): void {
    this.store.toggleSample(sampleId, subject);
  }

  cycleTypeColor(label: string): void {
    const selection = this.store.get();
    const assignments = new Map(selection.colorAssignments);
    const index = this.catalog.indexOf(label);
    const current = assignments.get(label) ?? (index >= 0 ? index % 10 : 0);
    assignments.set(label, (current + 1) % 10);
    this.store.update({ colorAssignments: assignments });
    this.renderTissue();
  }

  /** Plot order: substring search when active, otherwise ranking order. */
  plotOrder(): string[] {
    if (this.searchText) return searchOrder(this.catalog, this.searchText);
    if (this.rankData) return this.rankData.ranking.map((e) => e.types[0]);
    return this.catalog;
  }

  // ------------------------------------------------------------------ views

  private buildSkeleton(): void {
    this.root.innerHTML = "";
    const toolbar = document.createElement("header");
    toolbar.className = "toolbar";
    toolbar.append(
      this.selectControl("metric", ["silhouette", "dunn"], (v) =>
        this.track(this.setMetric(v as Metric)),
      ),
      this.selectControl("mode", ["relative", "absolute"], (v) =>
        this.track(this.setMode(v as Mode)),
      ),
      this.fadeControl(),
    );

    const main = document.createElement("main");
    main.className = "panes";
    const abundance = document.createElement("section");
    abundance.className = "pane abundance-pane";
    this.abundanceControls = document.createElement("div");
    this.abundanceControls.className = "abundance-controls";
    const search = document.createElement("input");
    search.type = "search";
    search.placeholder = "search cell types";
    search.className = "search-box";
    search.addEventListener("input", () => this.setSearch(search.value));
    this.abundanceControls.append(search);
    this.combinePane = document.createElement("div");
    this.plotListPane = document.createElement("div");
    this.plotListPane.className = "plot-list";
    abundance.append(this.abundanceControls, this.combinePane, this.plotListPane);

    this.tissuePane = document.createElement("section");
    this.tissuePane.className = "pane tissue-pane";
    this.microenvPane = document.createElement("section");
    this.microenvPane.className = "pane microenv-pane";
    main.append(abundance, this.tissuePane, this.microenvPane);
    this.root.append(toolbar, main);
  }

  private selectControl(
    name: string,
    values: string[],
    onChange: (value: string) => void,
  ): HTMLElement {
    const wrap = document.createElement("label");
    wrap.className = `control control-${name}`;
    wrap.textContent = `${name} `;
    const select = document.createElement("select");
    for (const value of values) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      select.append(option);
    }
    select.addEventListener("change", () => onChange(select.value));
    wrap.append(select);
    return wrap;
  }

  private fadeControl(): HTMLElement {
    const wrap = document.createElement("span");
    wrap.className = "control control-fade";
    wrap.append("fade ");
    for (const [label, value] of [
      ["none", null],
      ["A", "A"],
      ["B", "B"],
    ] as const) {
      const button = document.createElement("button");
      button.textContent = label;
      button.className = `fade-button fade-${label.toLowerCase()}`;
      button.addEventListener("click", () => this.setFade(value));
      wrap.append(button);
    }
    return wrap;
  }

  renderAbundance(): void {
    if (!this.project) return;
    const selection = this.store.get();

    this.combinePane.innerHTML = "";
    const drop = document.createElement("div");
    drop.className = "combine-drop";
    drop.addEventListener("dragover", (event) => event.preventDefault());
    drop.addEventListener("drop", (event) => {
      event.preventDefault();
      this.track(this.applyCombineDrop());
    });
    if (this.combinedTypes.length === 0) {
      drop.textContent = "drop plots here to combine cell types";
    } else {
      const title = document.createElement("div");
      title.className = "combine-title";
      title.textContent = this.combinedTypes.join(" + ");
      drop.append(title);
      if (this.combinedDist) {
        drop.append(
          renderRaincloud(this.combinedDist, {
            fadedCohort: selection.fadedCohort,
            selectedSamples: selection.selectedSamples,
            onTickClick: (sid) => this.selectTick(sid, [...this.combinedTypes]),
          }),
        );
      }
      const clear = document.createElement("button");
      clear.className = "combine-clear";
      clear.textContent = "clear";
      clear.addEventListener("click", () => {
        this.combinedTypes = [];
        this.combinedDist = null;
        this.renderAbundance();
      });
      drop.append(clear);
    }
    this.combinePane.append(drop);

    this.plotListPane.innerHTML = "";
    const scores = new Map(
      (this.rankData?.ranking ?? []).map((e) => [e.types[0], e] as const),
    );
    for (const label of this.plotOrder()) {
      const dist = this.distCache.get(this.distKey([label]));
      if (!dist) continue;
      const card = document.createElement("div");
      card.className = "plot-card";
      card.dataset.typeLabel = label;
      card.draggable = true;
      card.addEventListener("dragstart", () => {
        this.dragged = { kind: "combine", label };
      });
      const header = document.createElement("div");
      header.className = "plot-header";
      const name = document.createElement("span");
      name.className = "plot-title";
      name.textContent = label;
      header.append(name);
      const rank = scores.get(label);
      if (rank) {
        const badge = document.createElement("span");
        badge.className = "score-badge";
        badge.textContent = rank.sentinel ? "inf" : rank.score.toPrecision(3);
        header.append(badge);
      }
      card.append(header);
      card.append(
        renderRaincloud(dist, {
          fadedCohort: selection.fadedCohort,
          selectedSamples: selection.selectedSamples,
          onTickClick: (sid) => this.selectTick(sid, [label]),
        }),
      );
      this.plotListPane.append(card);
    }
  }

  renderTissue(): void {
    if (!this.project) return;
    const selection = this.store.get();
    this.tissuePane.innerHTML = "";

    const legend = document.createElement("div");
    legend.className = "type-legend";
    const colors = typeColors(this.catalog, selection.colorAssignments);
    for (const label of this.catalog) {
      const item = document.createElement("span");
      item.className = "legend-item";
      item.dataset.typeLabel = label;
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = colors.get(label) ?? "";
      item.append(swatch, label);
      item.addEventListener("click", () => this.cycleTypeColor(label));
      legend.append(item);
    }
    this.tissuePane.append(legend);

    this.tissuePane.append(
      renderTissueView(this.tissueData, {
        colors,
        hasSubject: selection.activeSubject !== null,
        cohortLabels: {
          A: this.project.summary.cohorts.A.label,
          B: this.project.summary.cohorts.B.label,
        },
      }),
    );
  }

  renderMicroenv(): void {
    if (!this.heatmapData) return;
    const selection = this.store.get();
    this.microenvPane.innerHTML = "";

    const controls = document.createElement("div");
    controls.className = "heatmap-controls";
    controls.append(
      this.selectControl("variant", ["difference", "metric"], (v) =>
        this.track(this.setHeatmapVariant(v as "difference" | "metric")),
      ),
    );
    (controls.querySelector("select") as HTMLSelectElement).value = this.heatmapVariant;
    this.microenvPane.append(controls);

    this.microenvPane.append(
      renderHeatmap(this.heatmapData, {
        onCellClick: (rowLabel, colLabel) =>
          this.track(
            this.openQuery({ center: [rowLabel], env: [colLabel], exclusive: false }),
          ),
      }),
    );

    if (this.queryState) {
      this.microenvPane.append(
        renderQueryBuilder(this.queryState.query, this.queryState.response, selection, {
          onDragStart: (entry) => {
            this.dragged = { kind: "extension", entry };
          },
          onDrop: () => this.track(this.applyQueryDrop()),
          onTickClick: (sid) => {
            if (this.queryState) this.selectTick(sid, this.queryState.query);
          },
        }),
      );
    }
  }
}
