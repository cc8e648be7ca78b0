/** DOM rendering of view models.
 *
 * The dashboard computes no indicator values: every number shown is the
 * verbatim string form of a value from a fetched view-model document.
 * Bar lengths are presentation scaling only; the numbers next to them
 * are the document's.
 */

import { DrilldownState, canDrill } from "./drilldown";
import type { DrilldownNode, ViewModelDocument } from "./types";

export interface WidgetCallbacks {
  onNavigate?: () => void;
}

export class WidgetState {
  readonly drill = new DrilldownState();
}

/** Verbatim display of a document value. */
export function show(value: number | string | null): string {
  return value === null ? "–" : String(value);
}

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const el = document.createElement(tag);
  if (className) el.className = className;
  if (text !== undefined) el.textContent = text;
  return el;
}

function statusChip(status: string): HTMLElement {
  return h("span", `status-chip status-${status}`, status);
}

function renderDrilldown(
  container: HTMLElement,
  model: ViewModelDocument,
  state: WidgetState,
  callbacks: WidgetCallbacks,
): void {
  const root = model.data.root as DrilldownNode | undefined;
  if (!root) {
    container.appendChild(h("p", "placeholder", "no chart data"));
    return;
  }
  const current = state.drill.resolve(root);

  const breadcrumb = h("nav", "breadcrumb");
  state.drill.breadcrumb(root).forEach((node, depth, trail) => {
    const last = depth === trail.length - 1;
    const crumb = h("button", last ? "crumb current" : "crumb", node.name);
    crumb.type = "button";
    crumb.disabled = last;
    crumb.addEventListener("click", () => {
      state.drill.jumpTo(depth);
      callbacks.onNavigate?.();
    });
    breadcrumb.appendChild(crumb);
  });
  container.appendChild(breadcrumb);

  const rows = current.children.length > 0 ? current.children : [current];
  const scale = Math.max(
    ...rows.map((node) => Math.max(node.actual, node.planned ?? 0)),
    1e-9,
  );
  const chart = h("div", "bar-chart");
  for (const node of rows) {
    const row = h("div", `bar-row status-${node.status}`);
    row.dataset.activity = node.activity;

    const label = h("div", "bar-label", node.name);
    row.appendChild(label);

    const bars = h("div", "bars");
    const actualBar = h("div", "bar actual");
    actualBar.style.width = `${(node.actual / scale) * 100}%`;
    bars.appendChild(actualBar);
    if (node.planned !== null) {
      const plannedBar = h("div", "bar planned");
      plannedBar.style.width = `${(node.planned / scale) * 100}%`;
      bars.appendChild(plannedBar);
    }
    row.appendChild(bars);

    const numbers = h("div", "bar-numbers");
    numbers.appendChild(h("span", "num actual", show(node.actual)));
    numbers.appendChild(h("span", "num planned", show(node.planned)));
    numbers.appendChild(h("span", "num deviation", show(node.deviation)));
    numbers.appendChild(statusChip(node.status));
    row.appendChild(numbers);

    const drill = h("button", "drill", "▸");
    drill.type = "button";
    drill.disabled = !canDrill(node) || node === current;
    drill.addEventListener("click", () => {
      if (state.drill.descend(root, node.activity)) callbacks.onNavigate?.();
    });
    row.appendChild(drill);
    chart.appendChild(row);
  }
  container.appendChild(chart);
}

function renderTable(container: HTMLElement, model: ViewModelDocument): void {
  const columns = (model.data.columns as string[]) ?? [];
  const rows = (model.data.rows as (number | string | null)[][]) ?? [];
  const table = h("table", "data-table");
  const head = h("tr");
  for (const column of columns) head.appendChild(h("th", undefined, column));
  table.appendChild(head);
  for (const row of rows) {
    const tr = h("tr");
    for (const cell of row) tr.appendChild(h("td", undefined, show(cell)));
    table.appendChild(tr);
  }
  container.appendChild(table);
}

function renderTrafficLight(container: HTMLElement, model: ViewModelDocument): void {
  const status = String(model.data.status ?? "no-baseline");
  container.appendChild(h("div", `light light-${status}`, status));
  const counts = (model.data.counts as Record<string, number>) ?? {};
  const list = h("div", "light-counts");
  for (const key of Object.keys(counts)) {
    list.appendChild(h("span", `count count-${key}`, `${key}: ${show(counts[key] ?? 0)}`));
  }
  container.appendChild(list);
}

function renderLineChart(container: HTMLElement, model: ViewModelDocument): void {
  const series = (model.data.series as { name: string; points: [string, number][] }[]) ?? [];
  for (const s of series) {
    const block = h("div", "series");
    block.appendChild(h("div", "series-name", s.name));
    const values = h("div", "series-points");
    for (const [at, value] of s.points) {
      const point = h("span", "point", show(value));
      point.title = at;
      values.appendChild(point);
    }
    block.appendChild(values);
    container.appendChild(block);
  }
}

function renderMilestones(container: HTMLElement, model: ViewModelDocument): void {
  const milestones =
    (model.data.milestones as {
      id: string;
      classification: string | null;
      points: { reported: string; forecast: string }[];
    }[]) ?? [];
  const table = h("table", "data-table");
  const head = h("tr");
  for (const column of ["milestone", "trend", "latest forecast"]) head.appendChild(h("th", undefined, column));
  table.appendChild(head);
  for (const m of milestones) {
    const tr = h("tr");
    tr.appendChild(h("td", undefined, m.id));
    tr.appendChild(h("td", `trend-${m.classification ?? "unknown"}`, m.classification ?? "–"));
    const last = m.points[m.points.length - 1];
    tr.appendChild(h("td", undefined, last ? last.forecast : "–"));
    table.appendChild(tr);
  }
  container.appendChild(table);
}

export function renderWidget(
  model: ViewModelDocument,
  state: WidgetState,
  callbacks: WidgetCallbacks = {},
): HTMLElement {
  const widget = h("section", "widget");
  widget.dataset.view = model.view;
  widget.appendChild(h("h2", "widget-title", model.title));
  const body = h("div", "widget-body");
  widget.appendChild(body);

  if (model.status === "no-data") {
    body.appendChild(h("p", "placeholder", "no data yet"));
    return widget;
  }
  switch (model.kind) {
    case "bar-chart-drilldown":
      renderDrilldown(body, model, state, callbacks);
      break;
    case "table":
      renderTable(body, model);
      break;
    case "traffic-light":
      renderTrafficLight(body, model);
      break;
    case "line-chart":
      renderLineChart(body, model);
      break;
    case "milestone-trend-chart":
      renderMilestones(body, model);
      break;
    default:
      body.appendChild(h("p", "placeholder", `unsupported view kind: ${model.kind}`));
  }
  for (const slot of Object.keys(model.children)) {
    const childModel = model.children[slot];
    if (!childModel) continue;
    const child = renderWidget(childModel, state, callbacks);
    child.classList.add("child-widget");
    child.dataset.slot = slot;
    widget.appendChild(child);
  }
  return widget;
}

/** Render all widgets, one per distinct view id, preserving drill state. */
export function renderDashboard(
  container: HTMLElement,
  models: ViewModelDocument[],
  states: Map<string, WidgetState>,
  callbacks: WidgetCallbacks = {},
): void {
  container.replaceChildren();
  const seen = new Set<string>();
  for (const model of models) {
    if (seen.has(model.view)) continue; // defensive: never show a widget twice
    seen.add(model.view);
    let state = states.get(model.view);
    if (!state) {
      state = new WidgetState();
      states.set(model.view, state);
    }
    container.appendChild(renderWidget(model, state, callbacks));
  }
  if (models.length === 0) {
    container.appendChild(h("p", "placeholder", "no views for your role"));
  }
}
