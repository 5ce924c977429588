import init, { eval_curve, update_curve, tables } from "./pkg/curvjet_web.js";

const PRESETS = {
  "fixed axis": '{"kind":"fixed-axis-poly","axis":[1,2,2],"coeffs":[0.2,0.8,-0.3,0.1],"domain":[-1,2]}',
  "poly3": '{"kind":"poly3","coeffs":[[0.3,0.5,-0.2],[0.1,-0.4,0.0,0.15],[-0.2,0.3,0.25]],"domain":[-1,1]}',
  "fourier3": '{"kind":"fourier3","coeffs":[[0.4,0.3,0.2],[-0.2,0.25,-0.1,0.05],[0.6,0.0,0.3]],"omega":1.5,"domain":[-1,2]}',
  "near pi": '{"kind":"poly3","coeffs":[[0,2.8],[0.3],[0]],"domain":[-1,1.2]}',
};
const COLORS = ["#c33", "#3a3", "#33c"];

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// Draws each series as a polyline; gaps (null) break the line.
function plot(canvas, xs, series, { log = false } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 40;
  ctx.clearRect(0, 0, w, h);
  const tf = (v) => (v == null || !isFinite(v) ? null : log ? Math.log10(Math.max(v, 1e-18)) : v);
  const ys = series.flatMap((s) => s.values.map(tf)).filter((v) => v != null);
  if (!ys.length) return;
  let lo = Math.min(...ys), hi = Math.max(...ys);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const py = (y) => h - pad - ((y - lo) / (hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  const fmt = (v) => (log ? `1e${v.toFixed(1)}` : v.toPrecision(3));
  ctx.fillText(fmt(hi), 2, pad + 4);
  ctx.fillText(fmt(lo), 2, h - pad);
  ctx.fillText(x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(3), w - pad - 30, h - pad + 14);
  if (lo < 0 && hi > 0 && !log) {
    ctx.strokeStyle = "#ddd";
    ctx.beginPath(); ctx.moveTo(pad, py(0)); ctx.lineTo(w - pad, py(0)); ctx.stroke();
  }
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    let pen = false;
    s.values.forEach((v, k) => {
      const y = tf(v);
      if (y == null) { pen = false; return; }
      if (pen) ctx.lineTo(px(xs[k]), py(y)); else ctx.moveTo(px(xs[k]), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function runCurve() {
  $("curve-error").textContent = "";
  const n = num("curve-n");
  const quantity = $("curve-quantity").value;
  if (quantity === "kappa_tilde" && n < 1) {
    $("curve-error").textContent = "the co-rotational derivative starts at n = 1";
    return;
  }
  try {
    const points = JSON.parse(eval_curve($("curve-spec").value, num("curve-a"), num("curve-b"), num("curve-count"), Math.max(n, 1)));
    const row = quantity === "kappa_tilde" ? n - 1 : n;
    const xs = points.map((p) => p.xi);
    const series = [0, 1, 2].map((c) => ({ color: COLORS[c], values: points.map((p) => (p.error ? null : p[quantity][row][c])) }));
    plot($("curve-plot"), xs, series);
    const bad = points.filter((p) => p.error);
    if (bad.length) $("curve-error").textContent = `${bad.length} points outside the admissible domain, e.g. ξ = ${bad[0].xi.toPrecision(4)}: ${bad[0].error}`;
  } catch (e) {
    $("curve-error").textContent = String(e);
  }
}

function runUpdate() {
  $("update-error").textContent = "";
  $("update-summary").textContent = "";
  const n = num("update-n");
  try {
    const points = JSON.parse(update_curve($("update-initial").value, $("update-increment").value, num("update-a"), num("update-b"), num("update-count"), n));
    const ok = points.filter((p) => !p.error);
    const xs = points.map((p) => p.xi);
    const series = [0, 1, 2].map((c) => ({ color: COLORS[c], values: points.map((p) => (p.error ? null : p.kappa[n][c])) }));
    plot($("update-plot"), xs, series);
    const worst = Math.max(...ok.map((p) => p.mixed_err[n]));
    $("update-summary").textContent = `max mixed error of ∂^${n}κ_f against the composed field: ${worst.toExponential(2)}`;
    if (ok.length < points.length) $("update-error").textContent = `${points.length - ok.length} points failed: ${points.find((p) => p.error).error}`;
  } catch (e) {
    $("update-error").textContent = String(e);
  }
}

function runTables() {
  const out = $("tables-out");
  try {
    const t = JSON.parse(tables(num("tables-m")));
    const m = t.jmax.length - 1;
    let html = "<h3>jmax(n − i)</h3><table><tr><th>n \\ i</th>";
    for (let i = 0; i <= m; i++) html += `<th>${i}</th>`;
    html += "</tr>";
    t.jmax.forEach((row, n) => {
      html += `<tr><th>${n}</th>`;
      for (let i = 0; i <= m; i++) html += `<td>${i < row.length ? row[i] : "-"}</td>`;
      html += "</tr>";
    });
    html += "</table><h3>bcoef(m, j)</h3><table><tr><th>m</th><th>j = 0 … jmax(m)</th></tr>";
    t.bcoef.forEach((row, k) => { html += `<tr><th>${k}</th><td>${row.join(", ")}</td></tr>`; });
    out.innerHTML = html + "</table>";
  } catch (e) {
    out.innerHTML = `<p class="error">${e}</p>`;
  }
}

await init();
for (const name of Object.keys(PRESETS)) $("curve-preset").add(new Option(name, name));
$("curve-preset").onchange = () => { $("curve-spec").value = PRESETS[$("curve-preset").value]; runCurve(); };
$("curve-spec").value = PRESETS["fixed axis"];
$("update-initial").value = PRESETS["poly3"];
$("update-increment").value = '{"kind":"poly3","coeffs":[[0.1,-0.2,0.05],[0.2,0.1],[-0.15,0.0,0.1]],"domain":[-1,2]}';
$("curve-run").onclick = runCurve;
$("update-run").onclick = runUpdate;
$("tables-run").onclick = runTables;
runCurve();
runUpdate();
runTables();
