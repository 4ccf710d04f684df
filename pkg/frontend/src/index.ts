/**
 * Browser entry point: demographics form, question loop, completion screen.
 * The page is plain DOM; the interesting state lives in SessionEngine and
 * EventSender, which the headless tests drive without any of this file.
 */

import { ServiceClient } from "./client.js";
import { SessionEngine } from "./engine.js";
import { RENDERERS } from "./render/registry.js";
import { button, el } from "./render/dom.js";
import { EventSender } from "./sender.js";
import type { ParticipantIn } from "./types.js";

interface AppConfig {
  serviceUrl: string;
  assetBase: string;
  token?: string;
}

function readConfig(): AppConfig {
  const params = new URLSearchParams(window.location.search);
  return {
    serviceUrl: params.get("service") ?? "http://localhost:8000",
    assetBase: params.get("assets") ?? "./assets/audio",
    token: params.get("token") ?? undefined,
  };
}

function demographicsForm(onSubmit: (p: ParticipantIn) => void): HTMLElement {
  const root = el("form", "demographics");
  const idInput = el("input") as HTMLInputElement;
  idInput.placeholder = "Identificador";
  const ageInput = el("input") as HTMLInputElement;
  ageInput.type = "number";
  ageInput.min = "7";
  ageInput.max = "17";
  const gender = el("select") as HTMLSelectElement;
  for (const g of ["Female", "Male"]) {
    const option = el("option", undefined, g) as HTMLOptionElement;
    option.value = g;
    gender.append(option);
  }
  const native = el("input") as HTMLInputElement;
  native.type = "checkbox";
  const langFail = el("input") as HTMLInputElement;
  langFail.type = "checkbox";
  root.append(
    idInput,
    ageInput,
    gender,
    el("label", undefined, "monolingüe"),
    native,
    el("label", undefined, "suspendió lengua"),
    langFail,
    button("Empezar", "start", () => {
      onSubmit({
        participant_id: idInput.value || "anonymous",
        gender: gender.value as ParticipantIn["gender"],
        native: native.checked,
        lang_fail: langFail.checked,
        age: Number(ageInput.value || "9"),
      });
    }),
  );
  return root;
}

async function runTest(app: HTMLElement, config: AppConfig, participant: ParticipantIn) {
  const client = new ServiceClient(config.serviceUrl, config.token);
  const session = await client.createSession(participant);
  const manifest = await client.getManifest(session.variant);
  const sender = new EventSender(client, session.session_id);
  const engine = new SessionEngine({
    manifest,
    enqueue: (events) => {
      sender.push(events);
      // Fire-and-forget between questions; the final flush before finalize
      // is awaited and re-sends anything that failed here.
      void sender.flush().catch(() => undefined);
    },
  });
  engine.start();

  const nextQuestion = () => {
    if (engine.capReached && !engine.done) engine.finishRemaining();
    if (engine.done) {
      void finish();
      return;
    }
    if (!engine.beginQuestion()) {
      nextQuestion();
      return;
    }
    const spec = engine.current!;
    const view = RENDERERS[spec.archetype](spec, {
      engine,
      assetBase: config.assetBase,
      onDone: () => {
        engine.endQuestion();
        nextQuestion();
      },
    });
    app.replaceChildren(el("h2", "qid", `Pregunta ${spec.qid}`), view);
  };

  const finish = async () => {
    app.replaceChildren(el("p", "status", "Enviando resultados..."));
    await sender.flush();
    const result = await client.finalize(session.session_id);
    app.replaceChildren(
      el("h2", undefined, "¡Juego terminado!"),
      el("p", "status", `Gracias por jugar. (${result.prediction.model_version.slice(0, 8)})`),
    );
  };

  nextQuestion();
}

export function mount(root: HTMLElement): void {
  const config = readConfig();
  root.replaceChildren(
    el("h1", undefined, "Juego de palabras"),
    demographicsForm((participant) => {
      void runTest(root, config, participant).catch((error: unknown) => {
        root.replaceChildren(el("p", "error", `No se pudo completar la sesión: ${String(error)}`));
      });
    }),
  );
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot !== null) mount(appRoot);
