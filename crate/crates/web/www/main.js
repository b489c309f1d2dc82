import init, { exponents, sweep, verify } from "./pkg/qillum_web.js";

const $ = (id) => document.getElementById(id);
const RANGES = { eta: [1e-3, 1], E: [1e-3, 10], N_B: [1e-2, 1e3] };

function params() {
  const p = {};
  for (const id of ["eta", "energy", "noise"]) {
    p[id] = 10 ** Number($(id).value);
    $(`${id}-v`).textContent = p[id].toPrecision(3);
  }
  return p;
}

function plot(rows, axis) {
  const key = { eta: "eta", E: "E", N_B: "N_B" }[axis];
  const ctx = $("plot").getContext("2d");
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  const xs = rows.map((r) => Math.log10(r[key]));
  const ys = rows.flatMap((r) => [r.exponent_coherent, r.exponent_tmsv]).filter((y) => y > 0);
  const lo = Math.log10(Math.min(...ys)), hi = Math.log10(Math.max(...ys));
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const px = (x) => 40 + ((x - x0) / (x1 - x0 || 1)) * (w - 60);
  const py = (y) => h - 30 - ((Math.log10(y) - lo) / (hi - lo || 1)) * (h - 50);
  const line = (field, color) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    rows.forEach((r, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, px(xs[i]), py(Math.max(r[field], 10 ** lo))));
    ctx.stroke();
  };
  line("exponent_coherent", "#1f77b4");
  line("exponent_tmsv", "#d62728");
  ctx.fillStyle = "#000";
  ctx.fillText(`log10 ${axis}: ${x0.toFixed(2)} .. ${x1.toFixed(2)}`, 40, h - 8);
  ctx.fillText(`exponent per mode (log): ${lo.toFixed(2)} .. ${hi.toFixed(2)}`, 40, 14);
  ctx.fillStyle = "#1f77b4"; ctx.fillText("coherent", w - 140, 14);
  ctx.fillStyle = "#d62728"; ctx.fillText("TMSV", w - 70, 14);
}

function refresh() {
  const p = params();
  const axis = $("axis").value;
  try {
    $("summary").className = "";
    $("summary").textContent = JSON.stringify(JSON.parse(exponents(p.eta, p.energy, p.noise, 1)), null, 2);
    const [a, b] = RANGES[axis];
    plot(JSON.parse(sweep(axis, a, b, 120, true, p.eta, p.energy, p.noise)), axis);
  } catch (e) {
    $("summary").className = "err";
    $("summary").textContent = String(e);
  }
}

function runVerify() {
  const p = params();
  const out = [];
  for (const t of ["1", "2", "3"]) {
    try {
      const r = JSON.parse(verify(t, Number($("samples").value), Number($("seed").value), p.eta, p.energy, p.noise));
      out.push(`${r.theorem}: ${r.passed ? "PASS" : "FAIL"} (${r.samples} samples, max violation ${r.max_violation.toExponential(2)})`);
    } catch (e) {
      out.push(`theorem ${t}: error ${e}`);
    }
  }
  $("verify").textContent = out.join("\n");
}

await init();
for (const id of ["eta", "energy", "noise", "axis"]) $(id).addEventListener("input", refresh);
$("run").addEventListener("click", runVerify);
refresh();
