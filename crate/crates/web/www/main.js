import init, { critical_line, classify_lattice, truncation_curve } from "./pkg/rankzeta_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function plot(canvas, xs, series, marks = []) {
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  g.clearRect(0, 0, w, h);
  const ys = series.flatMap((s) => s.ys).filter(Number.isFinite);
  let lo = Math.min(...ys), hi = Math.max(...ys);
  if (lo === hi) { lo -= 1; hi += 1; }
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => pad + (w - 2 * pad) * (x - x0) / (x1 - x0);
  const py = (y) => h - pad - (h - 2 * pad) * (y - lo) / (hi - lo);
  g.strokeStyle = "#bbb";
  g.beginPath(); g.moveTo(pad, py(0)); g.lineTo(w - pad, py(0)); g.stroke();
  g.fillStyle = "#555";
  g.fillText(x0.toFixed(2), pad, h - 8);
  g.fillText(x1.toFixed(2), w - pad - 30, h - 8);
  g.fillText(hi.toExponential(2), 2, pad - 8);
  g.fillText(lo.toExponential(2), 2, h - pad + 14);
  for (const s of series) {
    g.strokeStyle = s.color;
    g.beginPath();
    s.ys.forEach((y, i) => (i ? g.lineTo(px(xs[i]), py(y)) : g.moveTo(px(xs[i]), py(y))));
    g.stroke();
  }
  g.fillStyle = "#c00";
  for (const [x, y] of marks) g.fillRect(px(x) - 3, py(y) - 3, 6, 6);
}

function guard(out, f) {
  out.classList.remove("err");
  try { f(); } catch (e) { out.textContent = String(e.message ?? e); out.classList.add("err"); }
}

$("cl-go").onclick = () => guard($("cl-out"), () => {
  const r = JSON.parse(critical_line($("cl-group").value, $("cl-par").value, num("cl-t0"), num("cl-t1"), 600));
  plot($("cl-plot"), r.t, [{ ys: r.re, color: "#1565c0" }], r.zeros.map((t) => [t, 0]));
  $("cl-out").textContent = `${r.zeros.length} sign changes: ` + r.zeros.map((t) => t.toFixed(4)).join(", ");
});

$("lt-go").onclick = () => guard($("lt-out"), () => {
  const r = JSON.parse(classify_lattice(num("lt-a"), num("lt-b"), num("lt-c"), num("lt-d")));
  const v = r.verdict;
  $("lt-out").textContent = [
    `deg = ${r.degree.toFixed(6)}   h0 = ${r.h0.toFixed(12)}   RR defect = ${r.rr_defect.toExponential(2)}`,
    `normalized HN polygon: ${r.hn_polygon.map(([x, y]) => `(${x}, ${y.toFixed(6)})`).join(" ")}`,
    `reduced point z = ${v.reduced.x.toFixed(6)} + ${v.reduced.y.toFixed(6)}i`,
    `semistable: HN route ${v.hn_route}, cusp route ${v.cusp_route}${v.boundary ? " (on the boundary)" : ""}`,
  ].join("\n");
});

$("ti-go").onclick = () => guard($("ti-out"), () => {
  const r = JSON.parse(truncation_curve(num("ti-re"), num("ti-im"), num("ti-t"), 200, 4));
  plot($("ti-plot"), r.T, [
    { ys: r.closed.map((v) => v[0]), color: "#1565c0" },
    { ys: r.closed.map((v) => v[1]), color: "#2e7d32" },
  ], r.geometric.map((q) => [q.T, q.value[0]]));
  $("ti-out").textContent = "quadrature: " + r.geometric
    .map((q) => `T=${q.T.toFixed(2)}: ${q.value[0].toPrecision(10)} ${q.value[1] >= 0 ? "+" : "-"} ${Math.abs(q.value[1]).toPrecision(6)}i`)
    .join("; ");
});

await init();
$("cl-go").click();
$("lt-go").click();
$("ti-go").click();
