import { ReviewApi } from "./api.js";
import { ReviewSession } from "./state.js";
import { attachBoxDrawing, drawOverlay } from "./overlay.js";
import type { Box, VerdictKind } from "./types.js";

const SHORTCUTS: Record<string, VerdictKind> = {
  a: "correct",
  w: "wrong_class",
  b: "wrong_box",
  m: "missed_object",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("server") ?? "http://127.0.0.1:8081";
  const taggerId = params.get("tagger") ?? `tagger-${Math.floor(Math.random() * 1e6)}`;

  const api = new ReviewApi(baseUrl);
  const session = new ReviewSession(api, taggerId);

  const canvas = el<HTMLCanvasElement>("overlay");
  const ctx = canvas.getContext("2d")!;
  const statusLine = el<HTMLDivElement>("status");
  const noticeLine = el<HTMLDivElement>("notice");
  const labelSelect = el<HTMLSelectElement>("label-select");
  const image = new Image();
  let drawnBox: Box | null = null;
  let detachDrawing: (() => void) | null = null;

  function render(): void {
    statusLine.textContent =
      session.phase === "idle" ? "queue empty — nothing to review"
      : session.phase === "loading" ? "loading…"
      : session.phase === "backoff" ? "reconnecting…"
      : session.view ? `candidate ${session.view.candidate_id} (${taggerId})`
      : "";
    const note = session.validationError ?? session.notice?.text ?? "";
    noticeLine.textContent = note;
    if (session.view !== null && image.complete) {
      drawOverlay(ctx, canvas, {
        image, detection: session.view.detection, drawnBox,
      });
    } else {
      ctx.clearRect(0, 0, canvas.width, canvas.height);
    }
  }

  function loadCandidate(): void {
    drawnBox = null;
    if (detachDrawing !== null) {
      detachDrawing();
      detachDrawing = null;
    }
    const view = session.view;
    if (view === null) {
      render();
      return;
    }
    labelSelect.innerHTML = view.taxonomy
      .map((t) => `<option value="${t}">${t}</option>`)
      .join("");
    image.onload = () => {
      session.imageSize = { width: image.naturalWidth, height: image.naturalHeight };
      detachDrawing = attachBoxDrawing(canvas, image, (box) => {
        drawnBox = box;
        render();
      });
      render();
    };
    image.src = api.imageUrl(view);
  }

  async function act(verdict: VerdictKind): Promise<void> {
    await session.submit(verdict, {
      label: labelSelect.value || undefined,
      box: drawnBox ?? undefined,
    });
    loadCandidate();
  }

  for (const [key, verdict] of Object.entries(SHORTCUTS)) {
    el<HTMLButtonElement>(`btn-${verdict}`).addEventListener("click", () => void act(verdict));
    document.addEventListener("keydown", (ev) => {
      if (ev.key === key && !ev.repeat && (ev.target as HTMLElement).tagName !== "SELECT") {
        void act(verdict);
      }
    });
  }

  void session.start().then(loadCandidate);
  setInterval(render, 500); // lease countdown + notices stay fresh
}

bootstrap();
