export const DEFAULT_LAYOUT = { width: 640, height: 200, padding: 24 };
export function stepPath(points, layout = DEFAULT_LAYOUT) {
    if (points.length === 0)
        return "";
    const { width, height, padding } = layout;
    const innerW = width - 2 * padding;
    const innerH = height - 2 * padding;
    const times = points.map((p) => Date.parse(p.at));
    const t0 = times[0];
    const t1 = times[times.length - 1];
    const span = t1 - t0 || 1;
    const x = (t) => padding + ((t - t0) / span) * innerW;
    // Values are in [0, 1]; the y scale is fixed so charts are comparable.
    const y = (v) => padding + (1 - v) * innerH;
    let d = `M ${x(times[0]).toFixed(1)} ${y(points[0].value).toFixed(1)}`;
    for (let i = 1; i < points.length; i++) {
        d += ` H ${x(times[i]).toFixed(1)}`;
        d += ` V ${y(points[i].value).toFixed(1)}`;
    }
    d += ` H ${(padding + innerW).toFixed(1)}`;
    return d;
}
export function renderChart(points, label, layout = DEFAULT_LAYOUT) {
    if (points.length === 0) {
        return `<div class="chart-empty">No events yet for this series.</div>`;
    }
    const { width, height, padding } = layout;
    const path = stepPath(points, layout);
    const last = points[points.length - 1];
    const first = points[0];
    return `<svg viewBox="0 0 ${width} ${height}" class="chart" role="img" aria-label="${label}">
  <line x1="${padding}" y1="${height - padding}" x2="${width - padding}" y2="${height - padding}" class="axis"/>
  <line x1="${padding}" y1="${padding}" x2="${padding}" y2="${height - padding}" class="axis"/>
  <path d="${path}" class="step-line" fill="none"/>
  <text x="${padding}" y="${height - 6}" class="tick">${first.at}</text>
  <text x="${width - padding}" y="${height - 6}" text-anchor="end" class="tick">${last.at}</text>
  <text x="${width - padding}" y="${padding - 8}" text-anchor="end" class="tick">latest: ${String(last.value)}</text>
</svg>`;
}
