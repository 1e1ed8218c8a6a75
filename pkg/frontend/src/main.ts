/** Browser bootstrap: a minimal login/registration gate, then the app.
 * The API base URL comes from `?api=`, falling back to the local service. */

import { ApiClient, ApiError } from "./api.js";
import { startApp } from "./app.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? "http://127.0.0.1:8000";
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const client = new ApiClient(apiBase());

  root.innerHTML = `
    <section id="login">
      <h1>Communities of practice</h1>
      <input id="login-email" placeholder="email" />
      <input id="login-name" placeholder="display name (first visit only)" />
      <button id="login-submit">Enter</button>
      <p id="login-error" role="alert"></p>
    </section>`;
  const email = document.getElementById("login-email") as HTMLInputElement;
  const name = document.getElementById("login-name") as HTMLInputElement;
  const error = document.getElementById("login-error") as HTMLParagraphElement;

  document.getElementById("login-submit")!.addEventListener("click", async () => {
    try {
      let session;
      try {
        session = await client.login(email.value);
      } catch (failure) {
        if (failure instanceof ApiError && failure.code === "MemberNotFound" && name.value.trim()) {
          await client.register(name.value, email.value);
          session = await client.login(email.value);
        } else {
          throw failure;
        }
      }
      root.innerHTML = "";
      await startApp(root, client, session.member);
    } catch (failure) {
      error.textContent =
        failure instanceof ApiError ? `${failure.code}: ${failure.message}` : String(failure);
    }
  });
}

void boot();
