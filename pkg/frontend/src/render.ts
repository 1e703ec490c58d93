// Thin DOM/SVG rendering. No equilibrium math lives here: everything drawn
// comes from served payloads via the pure overlay/worksheet builders.

import type { NetworkPayload, Progress, SolveResult } from "./types.js";
import {
  equilibriumBadge,
  headlineMetrics,
  nodeOverlay,
  OVER_CAPACITY_COLOR,
  stationOverlay,
  type OverlayMode,
} from "./overlay.js";
import { buildCompareTable, metricSeries, type CompareTable } from "./worksheet.js";
import type { CompareRow, Upgrade } from "./types.js";
import { fmt } from "./units.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const CLASS_COLORS: Record<string, string> = {
  LEVEL2: "#1976d2",
  DCFC: "#ef6c00",
  CUSTOM: "#616161",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

interface Extent {
  toX: (x: number) => number;
  toY: (y: number) => number;
}

function extent(network: NetworkPayload, width: number, height: number, pad = 30): Extent {
  const xs = [...network.nodes.map((n) => n.x), ...network.stations.map((s) => s.x)];
  const ys = [...network.nodes.map((n) => n.y), ...network.stations.map((s) => s.y)];
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (width - 2 * pad) / Math.max(x1 - x0, 1e-9);
  const sy = (height - 2 * pad) / Math.max(y1 - y0, 1e-9);
  const s = Math.min(sx, sy);
  return {
    toX: (x) => pad + (x - x0) * s,
    // screen y grows downward; keep the plane's orientation
    toY: (y) => height - pad - (y - y0) * s,
  };
}

export function renderMap(
  container: HTMLElement,
  network: NetworkPayload,
  result: SolveResult | null,
  mode: OverlayMode,
  onStationClick: (id: string) => void,
): void {
  container.textContent = "";
  const width = 640;
  const height = 480;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: "100%",
    role: "img",
  });
  const { toX, toY } = extent(network, width, height);

  const stations = result ? stationOverlay(result, mode) : null;
  const nodes = result ? nodeOverlay(result) : null;

  network.nodes.forEach((n, i) => {
    const dot = svgEl("circle", {
      cx: String(toX(n.x)),
      cy: String(toY(n.y)),
      r: "4",
      fill: nodes ? nodes[i].color : "#90a4ae",
      stroke: "#37474f",
      "stroke-width": "0.5",
      "data-node": n.id,
    });
    const title = svgEl("title");
    title.textContent = nodes
      ? `${n.id}: ${n.ev_count} EVs, access ${nodes[i].display}`
      : `${n.id}: ${n.ev_count} EVs`;
    dot.appendChild(title);
    svg.appendChild(dot);
  });

  network.stations.forEach((s, j) => {
    const r = 6 + 2.5 * Math.sqrt(s.chargers);
    const glyph = svgEl("circle", {
      cx: String(toX(s.x)),
      cy: String(toY(s.y)),
      r: String(r),
      fill: stations ? stations[j].color : CLASS_COLORS[s.charger_class] ?? CLASS_COLORS.CUSTOM,
      stroke: stations?.[j].overCapacity ? "#000" : CLASS_COLORS[s.charger_class],
      "stroke-width": stations?.[j].overCapacity ? "3" : "1.5",
      opacity: "0.9",
      cursor: "pointer",
      "data-station": s.id,
    });
    const title = svgEl("title");
    title.textContent = stations
      ? stations[j].tooltip
      : `${s.id} (${s.charger_class}, ${s.chargers} chargers) — click to add a DCFC`;
    glyph.appendChild(title);
    glyph.addEventListener("click", () => onStationClick(s.id));
    svg.appendChild(glyph);
  });

  container.appendChild(svg);
}

export function renderLegend(container: HTMLElement, mode: OverlayMode, hasResult: boolean): void {
  container.textContent = "";
  if (!hasResult) {
    container.append(
      badge("Level 2", CLASS_COLORS.LEVEL2),
      badge("DCFC", CLASS_COLORS.DCFC),
      badge("custom", CLASS_COLORS.CUSTOM),
    );
    return;
  }
  const scale = el("span", { class: "scale" });
  scale.append(
    el("span", {}, mode === "rho" ? "ρ 0" : "queue 0"),
    el("span", { class: "ramp" }),
    el("span", {}, mode === "rho" ? "1" : "max"),
  );
  container.append(scale, badge("over capacity", OVER_CAPACITY_COLOR));
}

function badge(label: string, color: string): HTMLElement {
  const wrap = el("span", { class: "badge" });
  const chip = el("span", { class: "chip" });
  chip.style.background = color;
  wrap.append(chip, el("span", {}, label));
  return wrap;
}

export function renderProgress(container: HTMLElement, progress: Progress | null, status: string): void {
  container.textContent = "";
  if (!progress && status === "") return;
  const parts = [status];
  if (progress) {
    parts.push(`iteration ${progress.iteration}`);
    if (progress.epsilon !== null) parts.push(`ε ${fmt(progress.epsilon)}`);
    if (progress.wardrop_gap !== null) parts.push(`gap ${fmt(progress.wardrop_gap)}`);
  }
  container.append(el("span", {}, parts.filter(Boolean).join(" · ")));
}

export function renderHeadline(container: HTMLElement, result: SolveResult | null): void {
  container.textContent = "";
  if (!result) return;
  const badgeInfo = equilibriumBadge(result);
  const statusChip = el(
    "div",
    { class: `equilibrium ${badgeInfo.gapOk && badgeInfo.converged ? "ok" : "warn"}` },
    badgeInfo.text,
  );
  container.appendChild(statusChip);
  const grid = el("div", { class: "metrics" });
  for (const metric of headlineMetrics(result)) {
    const card = el("div", { class: "metric" });
    card.append(el("div", { class: "metric-value" }, metric.display));
    card.append(el("div", { class: "metric-label" }, metric.label));
    grid.appendChild(card);
  }
  container.appendChild(grid);
  for (const warning of result.warnings) {
    container.appendChild(el("div", { class: "warning" }, warning));
  }
}

export function renderWorksheet(
  container: HTMLElement,
  upgrades: Upgrade[],
  onRemove: (id: string) => void,
): void {
  container.textContent = "";
  if (upgrades.length === 0) {
    container.appendChild(el("p", { class: "hint" }, "Click stations on the map or use the top-N buttons to draft DCFC additions."));
    return;
  }
  const list = el("ul", { class: "worksheet-list" });
  for (const u of upgrades) {
    const item = el("li");
    item.append(el("span", {}, `${u.station_id}: +${u.dcfc_count} DCFC`));
    const remove = el("button", { type: "button" }, "×");
    remove.addEventListener("click", () => onRemove(u.station_id));
    item.appendChild(remove);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderCompare(container: HTMLElement, rows: CompareRow[] | null): CompareTable | null {
  container.textContent = "";
  if (!rows || rows.length === 0) return null;
  const table = buildCompareTable(rows);
  const tableEl = el("table", { class: "compare" });
  const head = el("tr");
  for (const col of table.columns) head.appendChild(el("th", {}, col));
  tableEl.appendChild(head);
  for (const row of table.rows) {
    const tr = el("tr", row.failed ? { class: "failed" } : {});
    tr.appendChild(el("td", {}, row.name));
    if (row.failed) {
      const td = el("td", { colspan: "4" }, `failed: ${row.error ?? "unknown"}`);
      tr.appendChild(td);
    } else {
      for (const cell of row.cells) tr.appendChild(el("td", {}, cell));
    }
    tableEl.appendChild(tr);
  }
  container.appendChild(tableEl);
  container.appendChild(renderCharts(rows));
  return table;
}

function renderCharts(rows: CompareRow[]): HTMLElement {
  const wrap = el("div", { class: "charts" });
  for (const series of metricSeries(rows)) {
    if (series.points.length < 2) continue;
    const w = 180;
    const h = 110;
    const pad = 12;
    const ys = series.points.map((p) => p.y);
    const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
    const sx = (w - 2 * pad) / Math.max(series.points.length - 1, 1);
    const sy = (h - 2 * pad) / Math.max(y1 - y0, 1e-9);
    const pts = series.points
      .map((p) => `${pad + p.x * sx},${h - pad - (p.y - y0) * sy}`)
      .join(" ");
    const fig = el("figure", { class: "chart" });
    const svg = svgEl("svg", { viewBox: `0 0 ${w} ${h}`, width: String(w) });
    svg.appendChild(svgEl("polyline", { points: pts, fill: "none", stroke: "#1976d2", "stroke-width": "2" }));
    for (const p of series.points) {
      svg.appendChild(
        svgEl("circle", {
          cx: String(pad + p.x * sx),
          cy: String(h - pad - (p.y - y0) * sy),
          r: "3",
          fill: "#1976d2",
        }),
      );
    }
    fig.appendChild(svg);
    fig.appendChild(el("figcaption", {}, series.label));
    wrap.appendChild(fig);
  }
  return wrap;
}

export function renderError(container: HTMLElement, message: string | null): void {
  container.textContent = "";
  if (message) container.appendChild(el("div", { class: "error-banner" }, message));
}
